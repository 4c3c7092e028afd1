#include "realbloch/abelian.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace rb {

AbelianGroup::AbelianGroup(long free_rank, std::vector<long> torsion)
    : free_rank_(free_rank), torsion_(std::move(torsion)) {
    if (free_rank_ < 0)
        throw std::invalid_argument("AbelianGroup: negative free rank");
    for (long t : torsion_)
        if (t < 2)
            throw std::invalid_argument("AbelianGroup: torsion order < 2");
    std::sort(torsion_.begin(), torsion_.end());
}

AbelianGroup AbelianGroup::direct_sum(const AbelianGroup& other) const {
    std::vector<long> t;
    t.reserve(torsion_.size() + other.torsion_.size());
    std::merge(torsion_.begin(), torsion_.end(), other.torsion_.begin(),
               other.torsion_.end(), std::back_inserter(t));
    AbelianGroup out;
    out.free_rank_ = free_rank_ + other.free_rank_;
    out.torsion_ = std::move(t);
    return out;
}

AbelianGroup AbelianGroup::power(long n) const {
    if (n < 0) throw std::invalid_argument("AbelianGroup::power: negative exponent");
    AbelianGroup out;
    out.free_rank_ = free_rank_ * n;
    out.torsion_.reserve(torsion_.size() * static_cast<size_t>(n));
    for (long t : torsion_)
        for (long i = 0; i < n; ++i) out.torsion_.push_back(t);
    std::sort(out.torsion_.begin(), out.torsion_.end());
    return out;
}

std::string AbelianGroup::render() const {
    if (is_zero()) return "0";
    std::string out;
    auto term = [&out](const std::string& base, long count) {
        if (!out.empty()) out += '+';
        out += base;
        if (count > 1) out += "^" + std::to_string(count);
    };
    if (free_rank_ > 0) term("Z", free_rank_);
    for (size_t i = 0; i < torsion_.size();) {
        size_t j = i;
        while (j < torsion_.size() && torsion_[j] == torsion_[i]) ++j;
        term("Z" + std::to_string(torsion_[i]), static_cast<long>(j - i));
        i = j;
    }
    return out;
}

namespace {

long parse_number(std::string_view s, size_t& pos) {
    size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) throw std::invalid_argument("AbelianGroup::parse: expected number");
    long value = 0;
    auto res = std::from_chars(s.data() + start, s.data() + pos, value);
    if (res.ec != std::errc())
        throw std::invalid_argument("AbelianGroup::parse: bad number");
    return value;
}

}  // namespace

AbelianGroup AbelianGroup::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("AbelianGroup::parse: empty input");
    if (text == "0") return AbelianGroup();
    long free_rank = 0;
    std::vector<long> torsion;
    size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != 'Z')
            throw std::invalid_argument("AbelianGroup::parse: expected 'Z'");
        ++pos;
        long order = 0;  // 0 marks a free summand
        if (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
            order = parse_number(text, pos);
        long count = 1;
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            count = parse_number(text, pos);
        }
        if (count < 1) throw std::invalid_argument("AbelianGroup::parse: bad multiplicity");
        if (order == 0) {
            free_rank += count;
        } else {
            if (order < 2) throw std::invalid_argument("AbelianGroup::parse: torsion order < 2");
            for (long i = 0; i < count; ++i) torsion.push_back(order);
        }
        if (pos < text.size()) {
            if (text[pos] != '+')
                throw std::invalid_argument("AbelianGroup::parse: expected '+'");
            ++pos;
            if (pos == text.size())
                throw std::invalid_argument("AbelianGroup::parse: trailing '+'");
        }
    }
    return AbelianGroup(free_rank, std::move(torsion));
}

}  // namespace rb
