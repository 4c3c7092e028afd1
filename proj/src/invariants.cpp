#include "realbloch/invariants.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <thread>

#include "realbloch/kernels.hpp"

namespace rb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVolS4 = 8.0 * kPi * kPi / 3.0;  // volume of the 4-sphere

struct KahanSum {
    double s = 0, c = 0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

int resolve_threads(const ComputeOptions& opts) {
    if (opts.threads > 0) return opts.threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& body) {
    if (threads <= 1 || n < 2) {
        body(0, n);
        return;
    }
    const int used = static_cast<int>(std::min<std::int64_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(used);
    const std::int64_t chunk = (n + used - 1) / used;
    for (int t = 0; t < used; ++t) {
        const std::int64_t b = t * chunk;
        const std::int64_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& th : pool) th.join();
}

long nearest_long(double v) { return std::lround(v); }

/* Axis bookkeeping for the streaming 4D integrals.  Stored indices run
 * over the evaluated range, padded by two nodes on each side (ghost
 * extension on charts, wrap on tori); interior indices carry quadrature
 * weights.  Chart axes use the five-point derivative stencil their
 * ghost region is sized for; torus axes keep the compact periodic one. */
struct StreamAxis {
    int stored = 0;              // number of stored nodes
    int lo = 0, hi = 0;          // interior stored range [lo, hi)
    std::vector<double> node;    // coordinate per stored index
    std::vector<double> weight;  // per stored index; zero outside interior
    double ca = 0, cb = 0;       // dP = ca (P+1 - P-1) + cb (P+2 - P-2)
};

struct StreamSetup {
    bool periodic = false;
    StreamAxis axis[4];   // axis[0] drives the slab loop
    int n0 = 0;           // axis-0 interior count
};

StreamAxis make_axis(const Grid& grid, int a) {
    StreamAxis out;
    const auto& ax = grid.axis(a);
    const int n = static_cast<int>(ax.nodes.size());
    out.stored = n + 4;
    out.lo = 2;
    out.hi = n + 2;
    out.node.resize(out.stored);
    out.weight.assign(out.stored, 0.0);
    if (grid.kind() == GridKind::Torus) {
        const double h = 2 * kPi / n;
        for (int s = 0; s < out.stored; ++s) {
            int i = ((s - 2) % n + n) % n;
            out.node[s] = ax.nodes[i];
            if (s >= out.lo && s < out.hi) out.weight[s] = ax.coord_weights[i];
        }
        out.ca = 1.0 / (2 * h);
        out.cb = 0.0;
    } else {
        const double h = ax.nodes[1] - ax.nodes[0];
        for (int s = 0; s < out.stored; ++s) {
            out.node[s] = ax.nodes[0] + (s - 2) * h;
            if (s >= out.lo && s < out.hi) out.weight[s] = ax.coord_weights[s - 2];
        }
        out.ca = 8.0 / (12 * h);
        out.cb = -1.0 / (12 * h);
    }
    return out;
}

StreamSetup make_stream_setup(const Grid& grid) {
    if (grid.dim() != 4)
        throw std::invalid_argument("second_chern: need a 4D grid");
    if (grid.kind() == GridKind::S3Angles)
        throw std::invalid_argument("second_chern: angle grids are 3D");
    if (grid.axis(0).nodes.size() < 8)
        throw std::invalid_argument("second_chern: grid too coarse (need N >= 8)");
    StreamSetup setup;
    setup.periodic = grid.kind() == GridKind::Torus;
    for (int a = 0; a < 4; ++a) setup.axis[a] = make_axis(grid, a);
    setup.n0 = setup.axis[0].hi - setup.axis[0].lo;
    return setup;
}

// Rolling cache of evaluated axis-0 slabs in component-major SoA layout.
class SlabCache {
  public:
    // filler(slab_key, soa buffer) evaluates one slab.
    SlabCache(int comps, std::int64_t slab_points, int capacity,
              std::function<void(int, double*)> filler)
        : comps_(comps), points_(slab_points), capacity_(capacity),
          filler_(std::move(filler)) {}

    const double* get(int key) {
        for (auto& e : entries_)
            if (e.key == key) return e.data.data();
        if (static_cast<int>(entries_.size()) == capacity_) entries_.pop_front();
        entries_.push_back({key, std::vector<double>(
                                     static_cast<size_t>(comps_) * points_)});
        filler_(key, entries_.back().data.data());
        return entries_.back().data.data();
    }

    std::int64_t comp_stride() const { return points_; }

  private:
    struct Entry {
        int key;
        std::vector<double> data;
    };
    int comps_;
    std::int64_t points_;
    int capacity_;
    std::function<void(int, double*)> filler_;
    std::deque<Entry> entries_;
};

/* Shared driver: for every interior axis-0 slab, obtain the five slabs
 * the derivative stencil sees, run `row_op` over all interior (s1, s2)
 * rows, and reduce the weighted row integrals in fixed index order.  The
 * row results are written into a preassigned array, so the reduction is
 * deterministic for any thread count. */
struct SlabSet {
    const double* prev2;
    const double* prev;
    const double* center;
    const double* next;
    const double* next2;
};

double integrate_slabs(
    const StreamSetup& setup, SlabCache& cache, int threads,
    const std::function<void(const SlabSet& slabs, std::int64_t row_offset,
                             int n3, double* row_density)>& row_op) {
    const StreamAxis& a0 = setup.axis[0];
    const StreamAxis& a1 = setup.axis[1];
    const StreamAxis& a2 = setup.axis[2];
    const StreamAxis& a3 = setup.axis[3];
    const int n3 = a3.hi - a3.lo;
    const std::int64_t rows_per_slab =
        static_cast<std::int64_t>(a1.hi - a1.lo) * (a2.hi - a2.lo);
    std::vector<double> row_values(rows_per_slab);

    KahanSum total;
    for (int i0 = 0; i0 < setup.n0; ++i0) {
        auto key = [&](int delta) {
            if (setup.periodic) return ((i0 + delta) % setup.n0 + setup.n0) % setup.n0;
            return a0.lo + i0 + delta;
        };
        SlabSet slabs;
        slabs.prev2 = cache.get(key(-2));
        slabs.prev = cache.get(key(-1));
        slabs.center = cache.get(key(0));
        slabs.next = cache.get(key(+1));
        slabs.next2 = cache.get(key(+2));

        parallel_for(rows_per_slab, threads, [&](std::int64_t rb, std::int64_t re) {
            std::vector<double> density(n3);
            for (std::int64_t r = rb; r < re; ++r) {
                const int s1 = a1.lo + static_cast<int>(r / (a2.hi - a2.lo));
                const int s2 = a2.lo + static_cast<int>(r % (a2.hi - a2.lo));
                const std::int64_t row_offset =
                    (static_cast<std::int64_t>(s1) * a2.stored + s2) * a3.stored +
                    a3.lo;
                row_op(slabs, row_offset, n3, density.data());
                KahanSum row;
                for (int i = 0; i < n3; ++i)
                    row.add(density[i] * a3.weight[a3.lo + i]);
                row_values[r] = row.s * a1.weight[s1] * a2.weight[s2];
            }
        });
        KahanSum slab;
        for (std::int64_t r = 0; r < rows_per_slab; ++r) slab.add(row_values[r]);
        total.add(slab.s * a0.weight[a0.lo + i0]);
    }
    return total.s;
}

void scatter_mat4(const Mat4& m, double* buf, std::int64_t comp_stride,
                  std::int64_t at) {
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const int e = 4 * r + c;
            buf[e * comp_stride + at] = m(r, c).real();
            buf[(16 + e) * comp_stride + at] = m(r, c).imag();
        }
}

std::string grid_note(const Grid& grid) { return grid.describe(); }

}  // namespace

InvariantReport make_report(double value, std::string method, std::string grid_spec,
                            std::vector<RefinementEntry> history) {
    InvariantReport report;
    report.value = value;
    report.nearest_integer = nearest_long(value);
    report.residual = std::abs(value - static_cast<double>(report.nearest_integer));
    report.method = std::move(method);
    report.grid_spec = std::move(grid_spec);
    report.history = std::move(history);
    return report;
}

InvariantReport second_chern_trace(const ProjectorMap& p, const Grid& grid,
                                   const ComputeOptions& opts) {
    StreamSetup setup = make_stream_setup(grid);
    const int threads = resolve_threads(opts);
    const StreamAxis* ax = setup.axis;
    const std::int64_t slab_points =
        static_cast<std::int64_t>(ax[1].stored) * ax[2].stored * ax[3].stored;

    auto fill = [&](int key, double* buf) {
        // key: torus -> interior node index on axis 0; chart -> stored index
        const double x0 = setup.periodic ? ax[0].node[ax[0].lo + key] : ax[0].node[key];
        parallel_for(ax[1].stored, threads, [&](std::int64_t b, std::int64_t e) {
            double kappa[4];
            kappa[0] = x0;
            for (std::int64_t s1 = b; s1 < e; ++s1) {
                kappa[1] = ax[1].node[s1];
                for (int s2 = 0; s2 < ax[2].stored; ++s2) {
                    kappa[2] = ax[2].node[s2];
                    for (int s3 = 0; s3 < ax[3].stored; ++s3) {
                        kappa[3] = ax[3].node[s3];
                        const std::int64_t at =
                            (s1 * ax[2].stored + s2) * ax[3].stored + s3;
                        scatter_mat4(p(kappa), buf, slab_points, at);
                    }
                }
            }
        });
    };

    SlabCache cache(32, slab_points, 6, fill);
    const double ca[4] = {ax[0].ca, ax[1].ca, ax[2].ca, ax[3].ca};
    const double cb[4] = {ax[0].cb, ax[1].cb, ax[2].cb, ax[3].cb};
    const std::ptrdiff_t off1 =
        static_cast<std::ptrdiff_t>(ax[2].stored) * ax[3].stored;
    const std::ptrdiff_t off2 = ax[3].stored;
    auto kernel = kernels::active().c2_trace_density;

    double total = integrate_slabs(
        setup, cache, threads,
        [&](const SlabSet& slabs, std::int64_t row_offset, int n3, double* density) {
            kernel(slabs.center + row_offset, slabs.prev + row_offset,
                   slabs.next + row_offset, slabs.prev2 + row_offset,
                   slabs.next2 + row_offset, slab_points, off1, off2, 1, ca, cb,
                   n3, density);
        });
    double value = total / (8 * kPi * kPi);
    return make_report(value, "c2-trace", grid_note(grid),
                       {{static_cast<int>(grid.axis(0).nodes.size()), value}});
}

InvariantReport second_chern_trace(const ProjectorField& field,
                                   const ComputeOptions& opts) {
    const Grid& grid = field.grid;
    if (grid.kind() != GridKind::Torus)
        throw std::invalid_argument(
            "second_chern_trace(field): chart fields need the map variant "
            "(boundary stencils would be one-sided)");
    StreamSetup setup = make_stream_setup(grid);
    const int threads = resolve_threads(opts);
    const StreamAxis* ax = setup.axis;
    const std::int64_t slab_points =
        static_cast<std::int64_t>(ax[1].stored) * ax[2].stored * ax[3].stored;
    const int n = static_cast<int>(grid.axis(0).nodes.size());

    auto fill = [&](int key, double* buf) {
        for (int s1 = 0; s1 < ax[1].stored; ++s1)
            for (int s2 = 0; s2 < ax[2].stored; ++s2)
                for (int s3 = 0; s3 < ax[3].stored; ++s3) {
                    const int i1 = ((s1 - 2) % n + n) % n;
                    const int i2 = ((s2 - 2) % n + n) % n;
                    const int i3 = ((s3 - 2) % n + n) % n;
                    const std::int64_t flat =
                        ((static_cast<std::int64_t>(key) * n + i1) * n + i2) * n + i3;
                    const std::int64_t at =
                        (static_cast<std::int64_t>(s1) * ax[2].stored + s2) *
                            ax[3].stored + s3;
                    scatter_mat4(field.samples[flat], buf, slab_points, at);
                }
    };

    SlabCache cache(32, slab_points, 6, fill);
    const double ca[4] = {ax[0].ca, ax[1].ca, ax[2].ca, ax[3].ca};
    const double cb[4] = {ax[0].cb, ax[1].cb, ax[2].cb, ax[3].cb};
    const std::ptrdiff_t off1 =
        static_cast<std::ptrdiff_t>(ax[2].stored) * ax[3].stored;
    const std::ptrdiff_t off2 = ax[3].stored;
    auto kernel = kernels::active().c2_trace_density;

    double total = integrate_slabs(
        setup, cache, threads,
        [&](const SlabSet& slabs, std::int64_t row_offset, int n3, double* density) {
            kernel(slabs.center + row_offset, slabs.prev + row_offset,
                   slabs.next + row_offset, slabs.prev2 + row_offset,
                   slabs.next2 + row_offset, slab_points, off1, off2, 1, ca, cb,
                   n3, density);
        });
    double value = total / (8 * kPi * kPi);
    return make_report(value, "c2-trace", grid_note(grid), {{n, value}});
}

InvariantReport second_chern_closed_form(const CoefficientMap& f, const Grid& grid,
                                         int band_sign, const ComputeOptions& opts) {
    if (grid.dim() != 4 || grid.kind() == GridKind::S3Angles)
        throw std::invalid_argument("second_chern_closed_form: need a 4D grid");
    if (band_sign != 1 && band_sign != -1)
        throw std::invalid_argument("second_chern_closed_form: band sign must be +-1");
    const int threads = resolve_threads(opts);
    const int n0 = static_cast<int>(grid.axis(0).nodes.size());
    const int n1 = static_cast<int>(grid.axis(1).nodes.size());
    const int n2 = static_cast<int>(grid.axis(2).nodes.size());
    const int n3 = static_cast<int>(grid.axis(3).nodes.size());
    auto kernel = kernels::active().antisym5_density;

    const std::int64_t rows = static_cast<std::int64_t>(n0) * n1 * n2;
    std::vector<double> row_values(rows);
    parallel_for(rows, threads, [&](std::int64_t rb, std::int64_t re) {
        std::vector<double> g(static_cast<size_t>(5) * n3);
        std::vector<double> dg(static_cast<size_t>(20) * n3);
        std::vector<double> density(n3);
        double kappa[4];
        for (std::int64_t r = rb; r < re; ++r) {
            const int i0 = static_cast<int>(r / (n1 * n2));
            const int i1 = static_cast<int>((r / n2) % n1);
            const int i2 = static_cast<int>(r % n2);
            kappa[0] = grid.axis(0).nodes[i0];
            kappa[1] = grid.axis(1).nodes[i1];
            kappa[2] = grid.axis(2).nodes[i2];
            for (int i3 = 0; i3 < n3; ++i3) {
                kappa[3] = grid.axis(3).nodes[i3];
                double fv[5], dfv[5][4];
                f.eval_grad(kappa, fv, dfv);
                double q = 0;
                for (int j = 0; j < 5; ++j) q += fv[j] * fv[j];
                if (q <= 0)
                    throw std::domain_error("second_chern_closed_form: Q <= 0 on grid");
                for (int j = 0; j < 5; ++j) {
                    g[static_cast<size_t>(j) * n3 + i3] = fv[j];
                    for (int a = 0; a < 4; ++a)
                        dg[static_cast<size_t>(4 * j + a) * n3 + i3] = dfv[j][a];
                }
            }
            kernel(g.data(), n3, dg.data(), n3, n3, density.data());
            KahanSum row;
            for (int i3 = 0; i3 < n3; ++i3)
                row.add(density[i3] * grid.axis(3).coord_weights[i3]);
            row_values[r] = row.s * grid.axis(0).coord_weights[i0] *
                            grid.axis(1).coord_weights[i1] *
                            grid.axis(2).coord_weights[i2];
        }
    });
    KahanSum total;
    for (std::int64_t r = 0; r < rows; ++r) total.add(row_values[r]);
    double value = band_sign * total.s / kVolS4;
    return make_report(value, "c2-closed-form", grid_note(grid), {{n0, value}});
}

namespace {

// 2D curvature integral with eager sampling; periodic wrap on tori,
// ghost evaluation on charts.
double first_chern_value(const ProjectorMap& p2, const Grid& grid2) {
    if (grid2.dim() != 2 || grid2.kind() == GridKind::S3Angles)
        throw std::invalid_argument("first_chern: need a 2D torus or chart grid");
    const bool periodic = grid2.kind() == GridKind::Torus;
    const int n1 = static_cast<int>(grid2.axis(0).nodes.size());
    const int n2 = static_cast<int>(grid2.axis(1).nodes.size());
    const int ghost = periodic ? 1 : 2;
    const int m1 = n1 + 2 * ghost, m2 = n2 + 2 * ghost;
    const double h1 = grid2.axis(0).nodes[1] - grid2.axis(0).nodes[0];
    const double h2 = grid2.axis(1).nodes[1] - grid2.axis(1).nodes[0];

    auto node = [&](int axis, int s) {
        const auto& ax = grid2.axis(axis);
        const int n = static_cast<int>(ax.nodes.size());
        const int i = s - ghost;
        if (periodic) return ax.nodes[((i % n) + n) % n];
        return ax.nodes[0] + i * (axis == 0 ? h1 : h2);
    };

    std::vector<Mat4> field(static_cast<size_t>(m1) * m2);
    double kappa[2];
    for (int s1 = 0; s1 < m1; ++s1) {
        kappa[0] = node(0, s1);
        for (int s2 = 0; s2 < m2; ++s2) {
            kappa[1] = node(1, s2);
            field[static_cast<size_t>(s1) * m2 + s2] = p2(kappa);
        }
    }
    auto at = [&](int s1, int s2) -> const Mat4& {
        return field[static_cast<size_t>(s1) * m2 + s2];
    };
    KahanSum sum;
    for (int i1 = 0; i1 < n1; ++i1) {
        const int s1 = i1 + ghost;
        for (int i2 = 0; i2 < n2; ++i2) {
            const int s2 = i2 + ghost;
            Mat4 d1, d2;
            if (periodic) {
                d1 = (at(s1 + 1, s2) - at(s1 - 1, s2)) / (2 * h1);
                d2 = (at(s1, s2 + 1) - at(s1, s2 - 1)) / (2 * h2);
            } else {
                d1 = (8.0 * (at(s1 + 1, s2) - at(s1 - 1, s2)) -
                      (at(s1 + 2, s2) - at(s1 - 2, s2))) / (12 * h1);
                d2 = (8.0 * (at(s1, s2 + 1) - at(s1, s2 - 1)) -
                      (at(s1, s2 + 2) - at(s1, s2 - 2))) / (12 * h2);
            }
            cplx tr = (at(s1, s2) * (d1 * d2 - d2 * d1)).trace();
            sum.add(-tr.imag() * grid2.axis(0).coord_weights[i1] *
                    grid2.axis(1).coord_weights[i2]);
        }
    }
    return sum.s / (2 * kPi);
}

}  // namespace

InvariantReport first_chern(const ProjectorMap& p2, const Grid& grid2) {
    double value = first_chern_value(p2, grid2);
    return make_report(value, "c1-trace", grid_note(grid2),
                       {{static_cast<int>(grid2.axis(0).nodes.size()), value}});
}

InvariantReport first_chern(const ProjectorField& field2) {
    const Grid& grid = field2.grid;
    if (grid.dim() != 2 || grid.kind() != GridKind::Torus)
        throw std::invalid_argument("first_chern(field): need a 2D torus field");
    const int n2 = static_cast<int>(grid.axis(1).nodes.size());
    auto p2 = [&field2, &grid, n2](const double kappa[2]) -> Mat4 {
        // locate the grid node; fields are sampled exactly on nodes
        const auto& ax0 = grid.axis(0);
        const auto& ax1 = grid.axis(1);
        auto find = [](const std::vector<double>& nodes, double x) {
            for (size_t i = 0; i < nodes.size(); ++i)
                if (std::abs(nodes[i] - x) < 1e-12) return static_cast<int>(i);
            throw std::invalid_argument("first_chern(field): off-node evaluation");
        };
        return field2.samples[static_cast<size_t>(find(ax0.nodes, kappa[0])) * n2 +
                              find(ax1.nodes, kappa[1])];
    };
    double value = first_chern_value(p2, grid);
    return make_report(value, "c1-trace", grid_note(grid),
                       {{static_cast<int>(grid.axis(0).nodes.size()), value}});
}

ProjectorMap slice_projector_map(const ProjectorMap& p4, int axis_a, int axis_b,
                                 const std::array<double, 2>& anchor) {
    if (axis_a == axis_b || axis_a < 0 || axis_b < 0 || axis_a > 3 || axis_b > 3)
        throw std::invalid_argument("slice_projector_map: bad axis pair");
    return [p4, axis_a, axis_b, anchor](const double kappa2[2]) -> Mat4 {
        double kappa[4];
        int other = 0;
        for (int a = 0; a < 4; ++a) {
            if (a == axis_a)
                kappa[a] = kappa2[0];
            else if (a == axis_b)
                kappa[a] = kappa2[1];
            else
                kappa[a] = anchor[other++];
        }
        return p4(kappa);
    };
}

void s3_embed(const double angles[3], double k_out[4]) {
    const double theta = angles[0], phi = angles[1], psi = angles[2];
    // (k1, k2, k3, k4); k4 is the scalar slot of the SU(2) identification.
    // Slot order fixed so the identity map has Cartan degree +1.
    k_out[3] = std::cos(theta);
    k_out[1] = std::sin(theta) * std::cos(phi);
    k_out[0] = std::sin(theta) * std::sin(phi) * std::cos(psi);
    k_out[2] = std::sin(theta) * std::sin(phi) * std::sin(psi);
}

InvariantReport cartan_degree(const SU2Map& map, const Grid& s3_grid,
                              double fd_step) {
    if (s3_grid.kind() != GridKind::S3Angles)
        throw std::invalid_argument("cartan_degree: need an s3-angles grid");
    const int n0 = static_cast<int>(s3_grid.axis(0).nodes.size());
    const int n1 = static_cast<int>(s3_grid.axis(1).nodes.size());
    const int n2 = static_cast<int>(s3_grid.axis(2).nodes.size());

    auto du_angles = [&](const double angles[3], Mat2 du[3]) {
        if (map.ambient_grad) {
            double k[4];
            s3_embed(angles, k);
            Mat2 dk[4];
            map.ambient_grad(k, dk);
            const double theta = angles[0], phi = angles[1], psi = angles[2];
            // Jacobian of the embedding; rows: (k1,k2,k3,k4), cols: angles.
            const double st = std::sin(theta), ct = std::cos(theta);
            const double sp = std::sin(phi), cp = std::cos(phi);
            const double ss = std::sin(psi), cs = std::cos(psi);
            const double jac[4][3] = {
                {ct * sp * cs, st * cp * cs, -st * sp * ss},
                {ct * cp, -st * sp, 0},
                {ct * sp * ss, st * cp * ss, st * sp * cs},
                {-st, 0, 0},
            };
            for (int i = 0; i < 3; ++i) {
                du[i] = Mat2::Zero();
                for (int a = 0; a < 4; ++a) du[i] += dk[a] * jac[a][i];
            }
            return;
        }
        for (int i = 0; i < 3; ++i) {
            double up[3] = {angles[0], angles[1], angles[2]};
            double dn[3] = {angles[0], angles[1], angles[2]};
            up[i] += fd_step;
            dn[i] -= fd_step;
            double kp[4], kn[4];
            s3_embed(up, kp);
            s3_embed(dn, kn);
            du[i] = (map.value(kp) - map.value(kn)) / (2 * fd_step);
        }
    };

    KahanSum total;
    double angles[3];
    for (int i0 = 0; i0 < n0; ++i0) {
        angles[0] = s3_grid.axis(0).nodes[i0];
        KahanSum plane;
        for (int i1 = 0; i1 < n1; ++i1) {
            angles[1] = s3_grid.axis(1).nodes[i1];
            for (int i2 = 0; i2 < n2; ++i2) {
                angles[2] = s3_grid.axis(2).nodes[i2];
                double k[4];
                s3_embed(angles, k);
                Mat2 u = map.value(k);
                Mat2 du[3];
                du_angles(angles, du);
                Mat2 a0 = u.adjoint() * du[0];
                Mat2 a1 = u.adjoint() * du[1];
                Mat2 a2 = u.adjoint() * du[2];
                cplx tr = (a0 * (a1 * a2 - a2 * a1)).trace();
                // form integral: coordinate weights, no measure jacobian
                plane.add(3.0 * tr.real() * s3_grid.axis(1).coord_weights[i1] *
                          s3_grid.axis(2).coord_weights[i2]);
            }
        }
        total.add(plane.s * s3_grid.axis(0).coord_weights[i0]);
    }
    double value = -total.s / (24 * kPi * kPi);
    return make_report(value, "degree-cartan", grid_note(s3_grid), {{n0, value}});
}

namespace {

// Orthonormal basis of the tangent space at unit y in R^m; deterministic.
void tangent_basis(const double* y, int m, std::vector<std::vector<double>>& basis) {
    basis.clear();
    for (int axis = 0; axis < m && static_cast<int>(basis.size()) < m - 1; ++axis) {
        std::vector<double> v(m, 0.0);
        v[axis] = 1.0;
        double dot = y[axis];
        for (int j = 0; j < m; ++j) v[j] -= dot * y[j];
        for (const auto& b : basis) {
            double d = 0;
            for (int j = 0; j < m; ++j) d += b[j] * v[j];
            for (int j = 0; j < m; ++j) v[j] -= d * b[j];
        }
        double norm = 0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-6) continue;  // axis too aligned with y
        for (double& x : v) x /= norm;
        basis.push_back(std::move(v));
    }
}

// Orientation of a tangent frame, in the convention induced by the
// stereographic chart (so that all degree methods share signs):
// sign of det[-p | u_1 | .. | u_{m-1}].  For self-maps the domain and
// target factors cancel, so only mixed-domain degrees feel the choice.
double frame_orientation(const double* p, const std::vector<std::vector<double>>& u,
                         int m) {
    Eigen::MatrixXd mat(m, m);
    for (int r = 0; r < m; ++r) {
        mat(r, 0) = -p[r];
        for (int c = 1; c < m; ++c) mat(r, c) = u[c - 1][r];
    }
    return mat.determinant() > 0 ? 1.0 : -1.0;
}

void normalize(double* x, int m) {
    double n = 0;
    for (int j = 0; j < m; ++j) n += x[j] * x[j];
    n = std::sqrt(n);
    for (int j = 0; j < m; ++j) x[j] /= n;
}

struct SphereNewtonConfig {
    int m;  // ambient dimension (d + 1)
    std::function<void(const double* x, double* y)> map;  // S^{m-1} -> S^{m-1}
};

// Multi-start Newton for phi(x) = y on a sphere, signed preimage count.
RegularValueResult sphere_regular_value(const SphereNewtonConfig& cfg,
                                        const RegularValueOptions& opts,
                                        const std::vector<double>& target) {
    const int m = cfg.m;
    const int d = m - 1;
    std::vector<std::vector<double>> tbasis;
    tangent_basis(target.data(), m, tbasis);
    if (static_cast<int>(tbasis.size()) != d)
        throw std::runtime_error("regular_value: degenerate target basis");

    std::mt19937_64 rng(opts.rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    RegularValueResult result;

    std::vector<double> x(m), y(m), xs(m), ys(m);
    for (int seed = 0; seed < opts.seeds; ++seed) {
        for (int j = 0; j < m; ++j) x[j] = gauss(rng);
        normalize(x.data(), m);
        bool converged = false;
        for (int iter = 0; iter < 60; ++iter) {
            cfg.map(x.data(), y.data());
            Eigen::VectorXd r(d);
            for (int i = 0; i < d; ++i) {
                double dot = 0;
                for (int j = 0; j < m; ++j) dot += tbasis[i][j] * y[j];
                r(i) = dot;
            }
            double dist2 = 0;
            for (int j = 0; j < m; ++j) {
                double diff = y[j] - target[j];
                dist2 += diff * diff;
            }
            if (dist2 < 1e-20) {
                converged = true;
                break;
            }
            std::vector<std::vector<double>> ubasis;
            tangent_basis(x.data(), m, ubasis);
            if (static_cast<int>(ubasis.size()) != d) break;
            Eigen::MatrixXd jac(d, d);
            for (int c = 0; c < d; ++c) {
                for (int j = 0; j < m; ++j)
                    xs[j] = x[j] + opts.fd_step * ubasis[c][j];
                normalize(xs.data(), m);
                cfg.map(xs.data(), ys.data());
                for (int i = 0; i < d; ++i) {
                    double dot = 0;
                    for (int j = 0; j < m; ++j) dot += tbasis[i][j] * (ys[j] - y[j]);
                    jac(i, c) = dot / opts.fd_step;
                }
            }
            Eigen::VectorXd delta = jac.fullPivLu().solve(-r);
            if (!delta.allFinite()) break;
            double step_norm = delta.norm();
            if (step_norm > 1.0) delta *= 1.0 / step_norm;  // damp wild steps
            for (int j = 0; j < m; ++j)
                for (int c = 0; c < d; ++c) x[j] += delta(c) * ubasis[c][j];
            normalize(x.data(), m);
        }
        if (!converged) continue;
        bool duplicate = false;
        for (const auto& root : result.preimages) {
            double dist2 = 0;
            for (int j = 0; j < m; ++j) {
                double diff = root[j] - x[j];
                dist2 += diff * diff;
            }
            if (dist2 < opts.dedupe_radius * opts.dedupe_radius) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;

        // orientation sign via centered differences along a tangent frame
        std::vector<std::vector<double>> ubasis;
        tangent_basis(x.data(), m, ubasis);
        Eigen::MatrixXd jac(d, d);
        cfg.map(x.data(), y.data());
        for (int c = 0; c < d; ++c) {
            std::vector<double> xp(x), xn(x), yp(m), yn(m);
            for (int j = 0; j < m; ++j) {
                xp[j] += opts.fd_step * ubasis[c][j];
                xn[j] -= opts.fd_step * ubasis[c][j];
            }
            normalize(xp.data(), m);
            normalize(xn.data(), m);
            cfg.map(xp.data(), yp.data());
            cfg.map(xn.data(), yn.data());
            for (int i = 0; i < d; ++i) {
                double dot = 0;
                for (int j = 0; j < m; ++j) dot += tbasis[i][j] * (yp[j] - yn[j]);
                jac(i, c) = dot / (2 * opts.fd_step);
            }
        }
        double det = jac.determinant();
        if (std::abs(det) < opts.jacobian_floor)
            throw std::runtime_error(
                "regular_value: target fails the regularity screen at a preimage");
        double sign = (det > 0 ? 1.0 : -1.0) *
                      frame_orientation(x.data(), ubasis, m) *
                      frame_orientation(target.data(), tbasis, m);
        result.preimages.push_back(x);
        result.signs.push_back(sign > 0 ? 1 : -1);
        result.degree += sign > 0 ? 1 : -1;
    }
    result.report = make_report(static_cast<double>(result.degree),
                                "degree-regular-value",
                                "newton(seeds=" + std::to_string(opts.seeds) + ")");
    return result;
}

}  // namespace

RegularValueResult regular_value_degree_s3(const SU2Map& map,
                                           const RegularValueOptions& opts) {
    SphereNewtonConfig cfg;
    cfg.m = 4;
    auto value = map.value;
    cfg.map = [value](const double* x, double* y) {
        Mat2 u = value(x);
        s3_from_su2(u, y);
    };
    std::vector<double> target = opts.target;
    if (target.empty()) target = {0.21, -0.4, 0.53, 0.7};
    normalize(target.data(), 4);
    return sphere_regular_value(cfg, opts, target);
}

RegularValueResult regular_value_degree_s4(const SphereMap& map,
                                           const RegularValueOptions& opts) {
    SphereNewtonConfig cfg;
    cfg.m = 5;
    auto value = map.value;
    cfg.map = [value](const double* x, double* y) { value(x, y); };
    std::vector<double> target = opts.target;
    if (target.empty()) target = {0.11, 0.83, -0.31, 0.42, 0.17};
    normalize(target.data(), 5);
    return sphere_regular_value(cfg, opts, target);
}

RegularValueResult regular_value_degree_t4(
    const std::function<void(const double kappa[4], double k_out[5])>& map,
    const RegularValueOptions& opts) {
    std::vector<double> target = opts.target;
    if (target.empty()) target = {0.0, 1.0, 0.0, 0.0, 0.0};
    normalize(target.data(), 5);
    std::vector<std::vector<double>> tbasis;
    tangent_basis(target.data(), 5, tbasis);

    std::mt19937_64 rng(opts.rng_seed);
    std::uniform_real_distribution<double> uni(-kPi, kPi);
    RegularValueResult result;
    double y[5], yp[5], yn[5];
    for (int seed = 0; seed < opts.seeds; ++seed) {
        double x[4];
        for (double& c : x) c = uni(rng);
        bool converged = false;
        for (int iter = 0; iter < 60; ++iter) {
            map(x, y);
            double dist2 = 0;
            for (int j = 0; j < 5; ++j) {
                double diff = y[j] - target[j];
                dist2 += diff * diff;
            }
            if (dist2 < 1e-20) {
                converged = true;
                break;
            }
            Eigen::VectorXd r(4);
            for (int i = 0; i < 4; ++i) {
                double dot = 0;
                for (int j = 0; j < 5; ++j) dot += tbasis[i][j] * y[j];
                r(i) = dot;
            }
            Eigen::MatrixXd jac(4, 4);
            for (int c = 0; c < 4; ++c) {
                double xp[4] = {x[0], x[1], x[2], x[3]};
                xp[c] += opts.fd_step;
                map(xp, yp);
                for (int i = 0; i < 4; ++i) {
                    double dot = 0;
                    for (int j = 0; j < 5; ++j) dot += tbasis[i][j] * (yp[j] - y[j]);
                    jac(i, c) = dot / opts.fd_step;
                }
            }
            Eigen::VectorXd delta = jac.fullPivLu().solve(-r);
            if (!delta.allFinite()) break;
            if (delta.norm() > 1.0) delta *= 1.0 / delta.norm();
            for (int c = 0; c < 4; ++c) x[c] = wrap_angle(x[c] + delta(c));
        }
        if (!converged) continue;
        bool duplicate = false;
        for (const auto& root : result.preimages) {
            double dist2 = 0;
            for (int c = 0; c < 4; ++c) {
                double diff = std::remainder(root[c] - x[c], 2 * kPi);
                dist2 += diff * diff;
            }
            if (dist2 < opts.dedupe_radius * opts.dedupe_radius) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        Eigen::MatrixXd jac(4, 4);
        for (int c = 0; c < 4; ++c) {
            double xp[4] = {x[0], x[1], x[2], x[3]};
            double xn[4] = {x[0], x[1], x[2], x[3]};
            xp[c] += opts.fd_step;
            xn[c] -= opts.fd_step;
            map(xp, yp);
            map(xn, yn);
            for (int i = 0; i < 4; ++i) {
                double dot = 0;
                for (int j = 0; j < 5; ++j) dot += tbasis[i][j] * (yp[j] - yn[j]);
                jac(i, c) = dot / (2 * opts.fd_step);
            }
        }
        double det = jac.determinant();
        if (std::abs(det) < opts.jacobian_floor)
            throw std::runtime_error(
                "regular_value: target fails the regularity screen at a preimage");
        double sign = (det > 0 ? 1.0 : -1.0) *
                      frame_orientation(target.data(), tbasis, 5);
        result.preimages.push_back({x[0], x[1], x[2], x[3]});
        result.signs.push_back(sign > 0 ? 1 : -1);
        result.degree += sign > 0 ? 1 : -1;
    }
    result.report = make_report(static_cast<double>(result.degree),
                                "degree-regular-value",
                                "newton(seeds=" + std::to_string(opts.seeds) + ")");
    return result;
}

RegularValueResult regular_value_degree_r4(
    const std::function<void(const double x[4], double y[4])>& map,
    const std::function<void(const double x[4], double jac[16])>& jacobian,
    const RegularValueOptions& opts) {
    std::vector<double> target = opts.target;
    if (target.empty()) target = {1.0, 0.2, 0.5, -0.3};
    std::mt19937_64 rng(opts.rng_seed);
    std::normal_distribution<double> gauss(0.0, 2.0);
    RegularValueResult result;
    double y[4];
    double jbuf[16];
    for (int seed = 0; seed < opts.seeds; ++seed) {
        Eigen::Vector4d x;
        for (int c = 0; c < 4; ++c) x(c) = gauss(rng);
        bool converged = false;
        for (int iter = 0; iter < 80; ++iter) {
            map(x.data(), y);
            Eigen::Vector4d r;
            for (int i = 0; i < 4; ++i) r(i) = y[i] - target[i];
            if (r.squaredNorm() < 1e-24) {
                converged = true;
                break;
            }
            Eigen::Matrix4d jac;
            if (jacobian) {
                jacobian(x.data(), jbuf);
                for (int i = 0; i < 4; ++i)
                    for (int c = 0; c < 4; ++c) jac(i, c) = jbuf[4 * i + c];
            } else {
                for (int c = 0; c < 4; ++c) {
                    Eigen::Vector4d xp = x;
                    xp(c) += opts.fd_step;
                    double ypc[4];
                    map(xp.data(), ypc);
                    for (int i = 0; i < 4; ++i)
                        jac(i, c) = (ypc[i] - y[i]) / opts.fd_step;
                }
            }
            Eigen::Vector4d delta = jac.fullPivLu().solve(-r);
            if (!delta.allFinite()) break;
            if (delta.norm() > 4.0) delta *= 4.0 / delta.norm();
            x += delta;
        }
        if (!converged) continue;
        bool duplicate = false;
        for (const auto& root : result.preimages) {
            double dist2 = 0;
            for (int c = 0; c < 4; ++c) {
                double diff = root[c] - x(c);
                dist2 += diff * diff;
            }
            if (dist2 < opts.dedupe_radius * opts.dedupe_radius) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        Eigen::Matrix4d jac;
        if (jacobian) {
            jacobian(x.data(), jbuf);
            for (int i = 0; i < 4; ++i)
                for (int c = 0; c < 4; ++c) jac(i, c) = jbuf[4 * i + c];
        } else {
            for (int c = 0; c < 4; ++c) {
                Eigen::Vector4d xp = x, xn = x;
                xp(c) += opts.fd_step;
                xn(c) -= opts.fd_step;
                double ypc[4], ync[4];
                map(xp.data(), ypc);
                map(xn.data(), ync);
                for (int i = 0; i < 4; ++i)
                    jac(i, c) = (ypc[i] - ync[i]) / (2 * opts.fd_step);
            }
        }
        double det = jac.determinant();
        if (std::abs(det) < opts.jacobian_floor)
            throw std::runtime_error(
                "regular_value: target fails the regularity screen at a preimage");
        result.preimages.push_back({x(0), x(1), x(2), x(3)});
        result.signs.push_back(det > 0 ? 1 : -1);
        result.degree += det > 0 ? 1 : -1;
    }
    result.report = make_report(static_cast<double>(result.degree),
                                "degree-regular-value",
                                "newton(seeds=" + std::to_string(opts.seeds) + ")");
    return result;
}

InvariantReport volume_degree_s4(const SphereMap& map, const Grid& chart_grid,
                                 const ComputeOptions& opts) {
    if (chart_grid.kind() != GridKind::TruncatedChart || chart_grid.dim() != 4)
        throw std::invalid_argument("volume_degree_s4: need a 4D chart grid");
    StreamSetup setup = make_stream_setup(chart_grid);
    const int threads = resolve_threads(opts);
    const StreamAxis* ax = setup.axis;
    const std::int64_t slab_points =
        static_cast<std::int64_t>(ax[1].stored) * ax[2].stored * ax[3].stored;

    auto value_fn = map.value;
    auto fill = [&](int key, double* buf) {
        const double x0 = ax[0].node[key];
        parallel_for(ax[1].stored, threads, [&](std::int64_t b, std::int64_t e) {
            double kappa[4];
            kappa[0] = x0;
            for (std::int64_t s1 = b; s1 < e; ++s1) {
                kappa[1] = ax[1].node[s1];
                for (int s2 = 0; s2 < ax[2].stored; ++s2) {
                    kappa[2] = ax[2].node[s2];
                    for (int s3 = 0; s3 < ax[3].stored; ++s3) {
                        kappa[3] = ax[3].node[s3];
                        double k[5], y[5];
                        stereo_to_sphere(std::span<const double>(kappa, 4),
                                         std::span<double>(k, 5));
                        value_fn(k, y);
                        const std::int64_t at =
                            (s1 * ax[2].stored + s2) * ax[3].stored + s3;
                        for (int j = 0; j < 5; ++j) buf[j * slab_points + at] = y[j];
                    }
                }
            }
        });
    };

    SlabCache cache(5, slab_points, 6, fill);
    const std::ptrdiff_t off[4] = {
        0, static_cast<std::ptrdiff_t>(ax[2].stored) * ax[3].stored, ax[3].stored, 1};
    auto kernel = kernels::active().antisym5_density;

    double total = integrate_slabs(
        setup, cache, threads,
        [&](const SlabSet& slabs, std::int64_t row_offset, int n3, double* density) {
            // derivative rows, then the antisymmetric contraction
            std::vector<double> g(static_cast<size_t>(5) * n3);
            std::vector<double> dg(static_cast<size_t>(20) * n3);
            for (int j = 0; j < 5; ++j) {
                const double* cj = slabs.center + j * slab_points + row_offset;
                const double* pj = slabs.prev + j * slab_points + row_offset;
                const double* nj = slabs.next + j * slab_points + row_offset;
                const double* pj2 = slabs.prev2 + j * slab_points + row_offset;
                const double* nj2 = slabs.next2 + j * slab_points + row_offset;
                for (int i = 0; i < n3; ++i) {
                    g[static_cast<size_t>(j) * n3 + i] = cj[i];
                    dg[static_cast<size_t>(4 * j) * n3 + i] =
                        (nj[i] - pj[i]) * ax[0].ca + (nj2[i] - pj2[i]) * ax[0].cb;
                    for (int a = 1; a < 4; ++a)
                        dg[static_cast<size_t>(4 * j + a) * n3 + i] =
                            (cj[i + off[a]] - cj[i - off[a]]) * ax[a].ca +
                            (cj[i + 2 * off[a]] - cj[i - 2 * off[a]]) * ax[a].cb;
                }
            }
            kernel(g.data(), n3, dg.data(), n3, n3, density);
        });
    double value = total / kVolS4;
    return make_report(value, "degree-volume", grid_note(chart_grid),
                       {{static_cast<int>(chart_grid.axis(0).nodes.size()), value}});
}

namespace {

std::vector<SliceC1> chart_slice_c1(const ProjectorMap& p4, double box, int n2d) {
    Grid slice_grid = Grid::truncated_chart(2, box, n2d);
    std::vector<SliceC1> out;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            ProjectorMap p2 = slice_projector_map(p4, a, b, {0.0, 0.0});
            double v = first_chern(p2, slice_grid).value;
            out.push_back({a, b, {0.0, 0.0}, v});
        }
    return out;
}

}  // namespace

AiConsistencyReport ai_consistency(const CoefficientMap& f,
                                   const SymmetryChoice& choice, int band_sign,
                                   const Grid& grid4, const ComputeOptions& opts) {
    AiConsistencyReport report;
    const double box = grid4.kind() == GridKind::TruncatedChart
                           ? grid4.chart_half_width()
                           : kPi;
    Grid screen = Grid::truncated_chart(4, box, 9);
    SymmetryReport sym = check_symmetry(f, choice, screen);
    report.symmetry_deviation = sym.max_deviation;
    report.applicable = sym.max_deviation < 1e-10 && sym.parity_match &&
                        sym.symmetry_class == SymmetryClass::AI;
    if (!report.applicable) return report;

    ProjectorMap p4 = [&f, band_sign](const double kappa[4]) {
        return band_projector(f, kappa, band_sign);
    };
    report.slice_c1 = chart_slice_c1(p4, box, 65);
    for (const auto& s : report.slice_c1)
        report.max_slice_c1 = std::max(report.max_slice_c1, std::abs(s.value));
    report.c1_vanishes = report.max_slice_c1 < 1e-6;

    report.c2 = second_chern_closed_form(f, grid4, band_sign, opts);
    report.c2_even = report.c2.nearest_integer % 2 == 0;
    report.consistent = report.c1_vanishes && report.c2_even;
    return report;
}

AiConsistencyReport ai_consistency_chart_map(const ProjectorMap& p4,
                                             const Grid& grid4,
                                             const ComputeOptions& opts) {
    AiConsistencyReport report;
    const double box = grid4.kind() == GridKind::TruncatedChart
                           ? grid4.chart_half_width()
                           : kPi;
    // Real-structure screen: conj(P(kappa)) = P(-kappa) on a sample box.
    {
        Grid screen = Grid::truncated_chart(4, box, 7);
        double kappa[4], neg[4];
        double worst = 0;
        for (std::int64_t i = 0; i < screen.total_points(); ++i) {
            screen.point(i, std::span<double>(kappa, 4));
            for (int a = 0; a < 4; ++a) neg[a] = -kappa[a];
            worst = std::max(worst, frob_norm(p4(kappa).conjugate() - p4(neg)));
        }
        report.symmetry_deviation = worst;
        report.applicable = worst < 1e-12;
    }
    if (!report.applicable) return report;

    report.slice_c1 = chart_slice_c1(p4, box, 65);
    for (const auto& s : report.slice_c1)
        report.max_slice_c1 = std::max(report.max_slice_c1, std::abs(s.value));
    report.c1_vanishes = report.max_slice_c1 < 1e-6;

    report.c2 = second_chern_trace(p4, grid4, opts);
    report.c2_even = report.c2.nearest_integer % 2 == 0;
    report.consistent = report.c1_vanishes && report.c2_even;
    return report;
}

CollapsePullbackReport collapse_pullback_check(const SphereMap& model_map,
                                               const Grid& chart_grid,
                                               const Grid& torus_grid,
                                               const ComputeOptions& opts) {
    if (torus_grid.kind() != GridKind::Torus || torus_grid.dim() != 4)
        throw std::invalid_argument("collapse_pullback_check: need a 4D torus grid");
    CollapsePullbackReport report;
    report.sphere_c2 =
        second_chern_trace(pullback_projector_chart(model_map), chart_grid, opts);
    report.torus_c2 =
        second_chern_trace(pullback_projector_torus(model_map), torus_grid, opts);
    report.match = report.sphere_c2.nearest_integer == report.torus_c2.nearest_integer;
    return report;
}

}  // namespace rb
