#include "firenze/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "firenze/errors.hpp"

namespace firenze {

const char* region_kind_name(RegionKind k) noexcept {
    switch (k) {
    case RegionKind::top_k: return "top";
    case RegionKind::bottom_k: return "bottom";
    case RegionKind::movers: return "movers";
    }
    return "?";
}

RankVector rank_scores(std::span<const std::string> ids, std::span<const double> scores) {
    const std::size_t n = ids.size();
    if (n == 0)
        throw domain_error("rank_scores: empty input");
    if (scores.size() != n)
        throw validation_error("rank_scores: ids and scores differ in length");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(scores[i]))
            throw validation_error("rank_scores: non-finite score for sample '" + ids[i] + "'");

    // Sort indices by (score, id); position in this order is the rank - 1.
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return ids[a] < ids[b];
    });
    std::vector<std::uint32_t> rank_of(n);
    for (std::size_t pos = 0; pos < n; ++pos)
        rank_of[order[pos]] = static_cast<std::uint32_t>(pos + 1);

    // Store id-sorted, checking uniqueness on the way.
    std::vector<std::uint32_t> by_id(n);
    std::iota(by_id.begin(), by_id.end(), 0u);
    std::sort(by_id.begin(), by_id.end(),
              [&](std::uint32_t a, std::uint32_t b) { return ids[a] < ids[b]; });
    RankVector rv;
    rv.ids_.reserve(n);
    rv.ranks_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && ids[by_id[i]] == ids[by_id[i - 1]])
            throw format_error("rank_scores: duplicate sample id '" + ids[by_id[i]] + "'");
        rv.ids_.push_back(ids[by_id[i]]);
        rv.ranks_.push_back(rank_of[by_id[i]]);
    }
    return rv;
}

namespace {

void check_k(std::size_t k, std::size_t n, const char* what) {
    if (k < 1 || k > n)
        throw domain_error(std::string(what) + ": k=" + std::to_string(k) +
                           " outside [1, N] with N=" + std::to_string(n));
}

} // namespace

std::vector<std::string> top_k(const RankVector& ranks, std::size_t k) {
    const std::size_t n = ranks.size();
    check_k(k, n, "top_k");
    std::vector<std::string> out;
    out.reserve(k);
    const auto cutoff = static_cast<std::uint32_t>(n - k);
    for (std::size_t i = 0; i < n; ++i)
        if (ranks.ranks()[i] > cutoff) out.push_back(ranks.sample_ids()[i]);
    return out; // ids_ is id-sorted, so the selection already is
}

std::vector<std::string> bottom_k(const RankVector& ranks, std::size_t k) {
    const std::size_t n = ranks.size();
    check_k(k, n, "bottom_k");
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i = 0; i < n; ++i)
        if (ranks.ranks()[i] <= k) out.push_back(ranks.sample_ids()[i]);
    return out;
}

std::pair<std::vector<std::string>, std::vector<std::string>>
movers(const RankVector& ref, const RankVector& test, std::size_t k) {
    const std::size_t n = ref.size();
    if (test.size() != n) {
        throw validation_error("movers: models rank different sample counts (" +
                               std::to_string(n) + " vs " + std::to_string(test.size()) + ")");
    }
    // Both RankVectors are id-sorted, so equality of the universes is a
    // straight walk; report the first divergence as a witness.
    for (std::size_t i = 0; i < n; ++i)
        if (ref.sample_ids()[i] != test.sample_ids()[i])
            throw validation_error("movers: sample universes differ, first mismatch '" +
                                   ref.sample_ids()[i] + "' vs '" + test.sample_ids()[i] + "'");
    if (k < 1 || 2 * k > n)
        throw domain_error("movers: k=" + std::to_string(k) +
                           " requires 2k <= N with N=" + std::to_string(n));

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    // Single total order by (delta, id).  Ids are unique, so this is strict;
    // down-movers come from the front, up-movers from the back, which keeps
    // the two sets disjoint even when every delta ties.
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const std::int64_t da = static_cast<std::int64_t>(test.ranks()[a]) - ref.ranks()[a];
        const std::int64_t db = static_cast<std::int64_t>(test.ranks()[b]) - ref.ranks()[b];
        if (da != db) return da < db;
        return ref.sample_ids()[a] < ref.sample_ids()[b];
    });

    std::vector<std::string> down, up;
    down.reserve(k);
    up.reserve(k);
    for (std::size_t i = 0; i < k; ++i) down.push_back(ref.sample_ids()[order[i]]);
    for (std::size_t i = n - k; i < n; ++i) up.push_back(ref.sample_ids()[order[i]]);
    std::sort(down.begin(), down.end());
    std::sort(up.begin(), up.end());
    return {std::move(up), std::move(down)};
}

RegionPair make_region_pair(RegionKind kind, const RankVector& ref, const RankVector& test,
                            std::size_t k) {
    RegionPair rp;
    rp.kind = kind;
    rp.k = k;
    switch (kind) {
    case RegionKind::top_k:
        rp.set_a = top_k(ref, k);
        rp.set_b = top_k(test, k);
        break;
    case RegionKind::bottom_k:
        rp.set_a = bottom_k(ref, k);
        rp.set_b = bottom_k(test, k);
        break;
    case RegionKind::movers: {
        auto [up, down] = movers(ref, test, k);
        rp.set_a = std::move(up);
        rp.set_b = std::move(down);
        break;
    }
    }
    return rp;
}

} // namespace firenze
