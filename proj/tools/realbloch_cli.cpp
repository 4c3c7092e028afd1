// realbloch: topological invariants of time-reversal-symmetric Bloch
// bundles.  Subcommands: tables (symbolic group tables), invariant
// (numerical Chern numbers), degree (Brouwer degrees), verify
// (consistency checks and the golden suite).
//
// Exit codes: 0 success, 1 operational error, 2 verification failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "realbloch/golden.hpp"
#include "realbloch/invariants.hpp"
#include "realbloch/kernels.hpp"
#include "realbloch/ktheory.hpp"
#include "realbloch/report.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "0.1.0";

struct GlobalOptions {
    int threads = 0;
    std::string kernel = "auto";
    std::string out_path;
    std::string format = "json";
    bool timing = false;
    std::string command_line;
    Clock::time_point start = Clock::now();
};

json make_manifest(const GlobalOptions& g, const std::string& config_hash,
                   const json& grid_spec) {
    json m;
    m["tool"] = "realbloch";
    m["version"] = kVersion;
    m["command"] = g.command_line;
    m["config_hash"] = config_hash;
    m["grid"] = grid_spec;
    m["threads"] = g.threads;
    m["kernel"] = rb::kernels::active_name();
    if (g.timing) {
        m["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                Clock::now() - g.start).count();
    } else {
        m["wall_time_ms"] = nullptr;  // omitted so identical runs are byte-identical
    }
    return m;
}

void emit(const GlobalOptions& g, const std::string& text) {
    if (g.out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(g.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + g.out_path);
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

void emit_report(const GlobalOptions& g, json payload, const std::string& config_hash,
                 const json& grid_spec) {
    payload["manifest"] = make_manifest(g, config_hash, grid_spec);
    emit(g, payload.dump(2));
}

rb::SpaceDescriptor parse_space(const std::string& name, int d) {
    if (name == "point") return rb::SpaceDescriptor::point();
    if (name == "tr-sphere") return rb::SpaceDescriptor::tr_sphere(d);
    if (name == "tr-torus") return rb::SpaceDescriptor::tr_torus(d);
    if (name == "sphere") return rb::SpaceDescriptor::sphere(d);
    if (name == "torus") return rb::SpaceDescriptor::torus(d);
    throw CLI::ValidationError("--space", "unknown space " + name);
}

// ---- tables ----

int run_tables_cohomology(const GlobalOptions& g, const std::string& space, int d,
                          int twist, int kmax) {
    rb::SpaceDescriptor x = parse_space(space, d);
    rb::Coefficients coeff{twist};
    if (g.format == "csv") {
        std::ostringstream out;
        out << "space,d,twist,k,group\n";
        for (long k = 0; k <= kmax; ++k)
            out << space << ',' << d << ',' << twist << ',' << k << ','
                << rb::h_space(x, k, coeff).render() << "\n";
        emit(g, out.str());
        return 0;
    }
    json rows = json::array();
    for (long k = 0; k <= kmax; ++k)
        rows.push_back({{"k", k}, {"group", rb::h_space(x, k, coeff).render()}});
    json payload;
    payload["space"] = space;
    payload["d"] = d;
    payload["twist"] = twist;
    payload["rows"] = std::move(rows);
    emit_report(g, std::move(payload), "-", {{"kmax", kmax}});
    return 0;
}

int run_tables_classification(const GlobalOptions& g) {
    struct Row {
        const char* category;
        const char* space;
        int d;
        const char* rank;
        std::string group;
    };
    auto render = [](const rb::ClassificationEntry& e) {
        return e.generator_label ? *e.generator_label : e.group.render();
    };
    std::vector<Row> rows;
    for (int d = 1; d <= 4; ++d) {
        rows.push_back({"VecC", "sphere", d, "1",
                        render(rb::classify_bundles(rb::BundleCategory::ComplexVB,
                                                    rb::SpaceDescriptor::sphere(d), 1))});
        rows.push_back({"VecC", "sphere", d, ">=2",
                        render(rb::classify_bundles(rb::BundleCategory::ComplexVB,
                                                    rb::SpaceDescriptor::sphere(d), 2))});
    }
    for (int d = 1; d <= 4; ++d) {
        rows.push_back({"VecR", "tr-sphere", d, "1",
                        render(rb::classify_bundles(rb::BundleCategory::RealVB,
                                                    rb::SpaceDescriptor::tr_sphere(d), 1))});
        rows.push_back({"VecR", "tr-sphere", d, ">=2",
                        render(rb::classify_bundles(rb::BundleCategory::RealVB,
                                                    rb::SpaceDescriptor::tr_sphere(d), 2))});
    }
    for (int d = 1; d <= 4; ++d) {
        rows.push_back({"VecC", "torus", d, "1",
                        render(rb::classify_bundles(rb::BundleCategory::ComplexVB,
                                                    rb::SpaceDescriptor::torus(d), 1))});
        rows.push_back({"VecC", "torus", d, ">=2",
                        render(rb::classify_bundles(rb::BundleCategory::ComplexVB,
                                                    rb::SpaceDescriptor::torus(d), 2))});
    }
    for (int d = 1; d <= 4; ++d) {
        rows.push_back({"VecR", "tr-torus", d, "1",
                        render(rb::classify_bundles(rb::BundleCategory::RealVB,
                                                    rb::SpaceDescriptor::tr_torus(d), 1))});
        rows.push_back({"VecR", "tr-torus", d, ">=2",
                        render(rb::classify_bundles(rb::BundleCategory::RealVB,
                                                    rb::SpaceDescriptor::tr_torus(d), 2))});
    }
    if (g.format == "csv") {
        std::ostringstream out;
        out << "category,space,d,m,group\n";
        for (const auto& r : rows)
            out << r.category << ',' << r.space << ',' << r.d << ',' << r.rank << ','
                << r.group << "\n";
        emit(g, out.str());
        return 0;
    }
    json jr = json::array();
    for (const auto& r : rows)
        jr.push_back({{"category", r.category},
                      {"space", r.space},
                      {"d", r.d},
                      {"m", r.rank},
                      {"group", r.group}});
    json payload;
    payload["rows"] = std::move(jr);
    emit_report(g, std::move(payload), "-", json::object());
    return 0;
}

int run_tables_cells(const GlobalOptions& g, const std::string& space, int d) {
    auto rows = rb::z2_cw_cells(parse_space(space, d));
    if (g.format == "csv") {
        std::ostringstream out;
        out << "n,fixed_cells,free_cells\n";
        for (const auto& r : rows)
            out << r.dimension << ',' << r.fixed_cells << ',' << r.free_cells << "\n";
        emit(g, out.str());
        return 0;
    }
    json jr = json::array();
    for (const auto& r : rows)
        jr.push_back({{"n", r.dimension},
                      {"fixed_cells", r.fixed_cells},
                      {"free_cells", r.free_cells}});
    json payload;
    payload["space"] = space;
    payload["d"] = d;
    payload["rows"] = std::move(jr);
    emit_report(g, std::move(payload), "-", json::object());
    return 0;
}

int run_tables_k(const GlobalOptions& g, const std::string& flavor,
                 const std::string& space, int d, long degree_j, bool reduced) {
    rb::KQuery query;
    if (flavor == "kr") query.flavor = rb::KFlavor::KR;
    else if (flavor == "ko") query.flavor = rb::KFlavor::KO;
    else if (flavor == "k") query.flavor = rb::KFlavor::K;
    else throw CLI::ValidationError("--flavor", "expected kr, ko or k");
    if (space == "point") query.space = rb::KSpaceKind::Point;
    else if (space == "tr-circle") query.space = rb::KSpaceKind::TRCircle;
    else if (space == "tr-torus") query.space = rb::KSpaceKind::TRTorus;
    else if (space == "tr-sphere") query.space = rb::KSpaceKind::TRSphere;
    else if (space == "torus") query.space = rb::KSpaceKind::OrdinaryCircleTorus;
    else if (space == "sphere") query.space = rb::KSpaceKind::OrdinarySphere;
    else throw CLI::ValidationError("--space", "unknown K-theory space " + space);
    query.d = d;
    query.degree_j = degree_j;
    query.reduced = reduced;
    rb::AbelianGroup group = rb::k_space(query);
    if (g.format == "csv") {
        std::ostringstream out;
        out << "flavor,space,d,j,reduced,group\n";
        out << flavor << ',' << space << ',' << d << ',' << degree_j << ','
            << (reduced ? 1 : 0) << ',' << group.render() << "\n";
        emit(g, out.str());
        return 0;
    }
    json payload;
    payload["flavor"] = flavor;
    payload["space"] = space;
    payload["d"] = d;
    payload["j"] = degree_j;
    payload["reduced"] = reduced;
    payload["group"] = group.render();
    emit_report(g, std::move(payload), "-", json::object());
    return 0;
}

int run_tables_k_audit(const GlobalOptions& g) {
    json rows = json::array();
    for (const auto& row : rb::audit_table_b2()) rows.push_back(rb::to_json(row));
    json payload;
    payload["table"] = "KR row of the reduced torus table";
    payload["rows"] = std::move(rows);
    emit_report(g, std::move(payload), "-", json::object());
    return 0;
}

int run_tables_rz2(const GlobalOptions& g) {
    auto table = rb::rz2_line_bundles_s1();
    if (g.format == "csv") {
        std::ostringstream out;
        out << "element,rep_at_plus,rep_at_minus,realification\n";
        for (const auto& e : table.elements)
            out << e.label << ',' << e.rep_at_plus << ',' << e.rep_at_minus << ','
                << e.realification << "\n";
        emit(g, out.str());
        return 0;
    }
    json payload;
    payload["group"] = table.group.render();
    json rows = json::array();
    for (const auto& e : table.elements)
        rows.push_back({{"element", e.label},
                        {"rep_at_plus", e.rep_at_plus},
                        {"rep_at_minus", e.rep_at_minus},
                        {"realification", e.realification}});
    payload["elements"] = std::move(rows);
    emit_report(g, std::move(payload), "-", json::object());
    return 0;
}

// ---- invariant / degree / verify ----

std::string model_hash(const std::string& source) {
    std::ifstream in(source);
    if (in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        return rb::fnv1a_hex(buf.str());
    }
    return rb::fnv1a_hex(source);
}

int run_invariant_c2(const GlobalOptions& g, const std::string& model_src,
                     const std::string& band, const std::string& method, int grid_n,
                     double box) {
    rb::Model model = rb::load_model(model_src);
    const int band_sign = band == "minus" ? -1 : +1;
    rb::Grid grid = rb::Grid::truncated_chart(4, box, grid_n);
    rb::InvariantReport report;
    if (method == "closed-form") {
        if (!model.has_closed_form())
            throw std::runtime_error(
                "closed-form c2 needs a rational model (standard-ansatz or custom)");
        report = rb::second_chern_closed_form(*model.coeffs, grid, band_sign,
                                              {g.threads});
    } else {
        report = rb::second_chern_trace(model.projector_map(band_sign), grid,
                                        {g.threads});
    }
    json payload = rb::to_json(report);
    payload["model"] = model.family;
    payload["band"] = band;
    emit_report(g, std::move(payload), model_hash(model_src),
                {{"kind", "chart"}, {"n", grid_n}, {"box", box}});
    return 0;
}

int run_degree(const GlobalOptions& g, const std::string& map_name,
               const std::string& method, int grid_n, double box, int seeds,
               double dedupe_radius, double jacobian_floor) {
    auto parse_n = [](const std::string& name, const std::string& prefix) {
        return std::stoi(name.substr(prefix.size()));
    };
    rb::RegularValueOptions reg_opts;
    reg_opts.seeds = seeds;
    reg_opts.dedupe_radius = dedupe_radius;
    reg_opts.jacobian_floor = jacobian_floor;

    json payload;
    if (method == "cartan") {
        rb::SU2Map map;
        if (map_name == "identity") map = rb::su2_power_map(1);
        else if (map_name.rfind("power:", 0) == 0)
            map = rb::su2_power_map(parse_n(map_name, "power:"));
        else if (map_name == "ansatz") map = rb::equator_ansatz_su2_map();
        else
            throw std::runtime_error(
                "cartan degree supports identity, power:n and ansatz");
        const int n = grid_n > 0 ? grid_n : 64;
        payload = rb::to_json(rb::cartan_degree(map, rb::Grid::s3_angles(n, n, n)));
    } else if (method == "volume") {
        rb::SphereMap map;
        if (map_name == "identity") map = rb::identity_sphere_map();
        else if (map_name == "ansatz") map = rb::ansatz_sphere_map(+1);
        else if (map_name.rfind("even:", 0) == 0)
            map = rb::equivariant_even_map(parse_n(map_name, "even:"));
        else
            throw std::runtime_error(
                "volume degree supports identity, ansatz and even:n");
        const int n = grid_n > 0 ? grid_n : 97;
        payload = rb::to_json(rb::volume_degree_s4(
            map, rb::Grid::truncated_chart(4, box, n), {g.threads}));
    } else {  // regular-value
        rb::RegularValueResult result;
        if (map_name == "identity") {
            result = rb::regular_value_degree_s3(rb::su2_power_map(1), reg_opts);
        } else if (map_name.rfind("power:", 0) == 0) {
            result = rb::regular_value_degree_s3(
                rb::su2_power_map(parse_n(map_name, "power:")), reg_opts);
        } else if (map_name == "ansatz") {
            // the proper map (z, w) -> (z + w, z w) realizing the degree
            auto f_map = [](const double x[4], double y[4]) {
                y[0] = x[0] + x[1];
                y[1] = x[0] * x[1] - x[2] * x[3];
                y[2] = x[2] + x[3];
                y[3] = x[0] * x[3] + x[1] * x[2];
            };
            auto f_jac = [](const double x[4], double jac[16]) {
                const double rows[16] = {1,    1,    0,     0,     x[1], x[0],
                                         -x[3], -x[2], 0,    0,     1,    1,
                                         x[3], x[2], x[1], x[0]};
                for (int i = 0; i < 16; ++i) jac[i] = rows[i];
            };
            result = rb::regular_value_degree_r4(f_map, f_jac, reg_opts);
        } else if (map_name.rfind("even:", 0) == 0) {
            result = rb::regular_value_degree_s4(
                rb::equivariant_even_map(parse_n(map_name, "even:")), reg_opts);
        } else if (map_name == "collapse") {
            result = rb::regular_value_degree_t4(
                [](const double kappa[4], double k[5]) { rb::collapse_map(kappa, k); },
                reg_opts);
        } else {
            throw std::runtime_error("unknown map " + map_name);
        }
        payload = rb::to_json(result);
    }
    payload["map"] = map_name;
    payload["degree_method"] = method;
    emit_report(g, std::move(payload), "-",
                {{"grid", grid_n}, {"box", box}, {"seeds", seeds}});
    return 0;
}

int run_verify_ai(const GlobalOptions& g, const std::string& model_src,
                  const std::string& band, int grid_n, double box) {
    rb::Model model = rb::load_model(model_src);
    const int band_sign = band == "minus" ? -1 : +1;
    rb::Grid grid = rb::Grid::truncated_chart(4, box, grid_n);
    rb::AiConsistencyReport report;
    if (model.has_closed_form())
        report = rb::ai_consistency(*model.coeffs, model.j, band_sign, grid,
                                    {g.threads});
    else
        report = rb::ai_consistency_chart_map(model.projector_map(band_sign), grid,
                                              {g.threads});
    json payload = rb::to_json(report);
    payload["model"] = model.family;
    payload["band"] = band;
    emit_report(g, std::move(payload), model_hash(model_src),
                {{"kind", "chart"}, {"n", grid_n}, {"box", box}});
    return report.applicable && report.consistent ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    GlobalOptions g;
    {
        std::ostringstream cmd;
        for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
        g.command_line = cmd.str();
    }

    CLI::App app{"topological invariants of Real Bloch bundles"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.add_option("--threads", g.threads,
                   "worker threads (0 = all, 1 = reproducible)");
    app.add_option("--kernel", g.kernel, "kernel variant: auto|ref|scalar|avx2")
        ->check(CLI::IsMember({"auto", "ref", "scalar", "avx2"}));
    app.add_option("--out", g.out_path, "write the result to a file");
    app.add_flag("--timing", g.timing, "include wall time in the manifest");

    // tables
    auto* tables = app.add_subcommand("tables", "symbolic group tables");
    tables->require_subcommand(1);
    std::string space = "tr-torus", flavor = "kr";
    int d = 1, twist = 0, kmax = 10;
    long degree_j = 0;
    bool reduced = false;

    auto* cohom = tables->add_subcommand("cohomology", "equivariant cohomology table");
    cohom->add_option("--space", space, "tr-sphere|tr-torus|sphere|torus|point");
    cohom->add_option("--d", d, "dimension");
    cohom->add_option("--twist", twist, "coefficient twist 0|1")
        ->check(CLI::IsMember({0, 1}));
    cohom->add_option("--kmax", kmax, "largest degree");
    cohom->add_option("--format", g.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* classification =
        tables->add_subcommand("classification", "vector-bundle classification table");
    classification->add_option("--format", g.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* cells = tables->add_subcommand("cells", "Z2-CW cell counts");
    cells->add_option("--space", space, "tr-sphere|tr-torus");
    cells->add_option("--d", d, "dimension");
    cells->add_option("--format", g.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* ktable = tables->add_subcommand("k", "K-theory groups");
    ktable->add_option("--flavor", flavor, "kr|ko|k");
    ktable->add_option("--space", space,
                       "point|tr-circle|tr-torus|tr-sphere|torus|sphere");
    ktable->add_option("--d", d, "dimension");
    ktable->add_option("--j", degree_j, "degree (group in degree -j)");
    ktable->add_flag("--reduced", reduced, "reduced groups");
    ktable->add_option("--format", g.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* kaudit = tables->add_subcommand("k-audit", "published KR torus row audit");

    auto* rz2 = tables->add_subcommand("rz2-lines",
                                       "line bundles with mixed structure over S~1");
    rz2->add_option("--format", g.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    // invariant
    auto* invariant = app.add_subcommand("invariant", "numerical Chern numbers");
    invariant->require_subcommand(1);
    std::string model_src = "standard-ansatz", band = "plus", method = "trace";
    int grid_n = 97;
    double box = 12.0;
    auto* c2 = invariant->add_subcommand("c2", "second Chern number");
    c2->add_option("--model", model_src, "standard-ansatz|hopf|<config.json>");
    c2->add_option("--band", band, "plus|minus")
        ->check(CLI::IsMember({"plus", "minus"}));
    c2->add_option("--method", method, "trace|closed-form")
        ->check(CLI::IsMember({"trace", "closed-form"}));
    c2->add_option("--grid", grid_n, "nodes per chart axis");
    c2->add_option("--box", box, "chart half-width L");

    // degree
    auto* degree = app.add_subcommand("degree", "Brouwer degree of a builtin map");
    std::string map_name = "identity", degree_method = "regular-value";
    int seeds = 400;
    int degree_grid = 0;
    double degree_box = 6.0;
    degree->add_option("--map", map_name, "identity|power:n|ansatz|even:n|collapse");
    degree->add_option("--method", degree_method, "cartan|regular-value|volume")
        ->check(CLI::IsMember({"cartan", "regular-value", "volume"}));
    degree->add_option("--grid", degree_grid, "grid nodes (method dependent)");
    degree->add_option("--box", degree_box, "chart half-width for the volume method");
    degree->add_option("--seeds", seeds, "Newton seed count");
    double dedupe_radius = 1e-6, jacobian_floor = 1e-8;
    degree->add_option("--dedupe-radius", dedupe_radius,
                       "preimages closer than this are one root");
    degree->add_option("--jacobian-floor", jacobian_floor,
                       "regularity screen on |det J| at each preimage");

    // verify
    auto* verify = app.add_subcommand("verify", "consistency checks");
    verify->require_subcommand(1);
    std::string ai_model = "standard-ansatz", ai_band = "plus";
    int ai_grid = 97;
    double ai_box = 12.0;
    auto* ai = verify->add_subcommand("ai", "class-AI necessary conditions");
    ai->add_option("--model", ai_model, "standard-ansatz|hopf|<config.json>");
    ai->add_option("--band", ai_band, "plus|minus")
        ->check(CLI::IsMember({"plus", "minus"}));
    ai->add_option("--grid", ai_grid, "nodes per chart axis");
    ai->add_option("--box", ai_box, "chart half-width L");
    auto* golden = verify->add_subcommand("golden", "run the full golden suite");

    // let the global options (--threads, --out, ...) appear after a
    // subcommand as well
    for (auto* sub : app.get_subcommands({})) {
        sub->fallthrough();
        for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        rb::kernels::set_level(g.kernel);
        if (cohom->parsed()) return run_tables_cohomology(g, space, d, twist, kmax);
        if (classification->parsed()) return run_tables_classification(g);
        if (cells->parsed()) return run_tables_cells(g, space, d);
        if (ktable->parsed())
            return run_tables_k(g, flavor, space, d, degree_j, reduced);
        if (kaudit->parsed()) return run_tables_k_audit(g);
        if (rz2->parsed()) return run_tables_rz2(g);
        if (c2->parsed())
            return run_invariant_c2(g, model_src, band, method, grid_n, box);
        if (degree->parsed())
            return run_degree(g, map_name, degree_method, degree_grid, degree_box,
                              seeds, dedupe_radius, jacobian_floor);
        if (ai->parsed()) return run_verify_ai(g, ai_model, ai_band, ai_grid, ai_box);
        if (golden->parsed()) {
            auto result = rb::run_golden_suite(std::cout, g.threads);
            return result.failed == 0 ? 0 : 2;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
