#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rb {

/* Finitely generated abelian group in normal form: a free rank plus a
 * sorted multiset of cyclic torsion orders (each >= 2).  Every group
 * appearing in the cohomology and K-theory tables lives here; equality
 * of normal forms is isomorphism. */
class AbelianGroup {
  public:
    AbelianGroup() = default;
    AbelianGroup(long free_rank, std::vector<long> torsion);

    static AbelianGroup zero() { return AbelianGroup(); }
    static AbelianGroup free_part(long n) { return AbelianGroup(n, {}); }
    static AbelianGroup cyclic(long k) { return AbelianGroup(0, {k}); }
    // Z, Z2 shorthands used all over the table generators.
    static AbelianGroup Z() { return free_part(1); }
    static AbelianGroup Z2() { return cyclic(2); }

    long free_rank() const { return free_rank_; }
    const std::vector<long>& torsion() const { return torsion_; }

    bool is_zero() const { return free_rank_ == 0 && torsion_.empty(); }
    // Count of cyclic summands in the normal form (free + torsion).
    long summand_count() const {
        return free_rank_ + static_cast<long>(torsion_.size());
    }

    AbelianGroup direct_sum(const AbelianGroup& other) const;
    AbelianGroup power(long n) const;

    bool operator==(const AbelianGroup& other) const = default;
    bool is_isomorphic(const AbelianGroup& other) const { return *this == other; }

    // Canonical text form, e.g. "0", "Z", "Z^3+Z2^5".  Grammar:
    //   group = "0" | term ('+' term)*
    //   term  = "Z" | "Z^" n | "Z" k | "Z" k "^" n
    // with k a torsion order and n a multiplicity.
    std::string render() const;
    static AbelianGroup parse(std::string_view text);

  private:
    long free_rank_ = 0;
    std::vector<long> torsion_;  // sorted ascending, every entry >= 2
};

inline AbelianGroup operator+(const AbelianGroup& a, const AbelianGroup& b) {
    return a.direct_sum(b);
}

}  // namespace rb
