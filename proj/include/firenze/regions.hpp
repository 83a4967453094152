#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace firenze {

// The three comparison regions.  TopK and BottomK are per-model rank slices;
// Movers contrasts the samples whose rank rose most against those whose rank
// fell most between the two models.
enum class RegionKind {
    top_k,
    bottom_k,
    movers,
};

const char* region_kind_name(RegionKind k) noexcept;

// Dense ranking of one model's scores: rank 1 is the lowest score, rank N
// the highest (most suspicious).  Ranks are a permutation of 1..N; score
// ties are broken by ascending sample id so the ranking is a deterministic
// function of the (id, score) multiset, never of input order.
class RankVector {
public:
    std::size_t size() const noexcept { return ids_.size(); }
    // Sample ids in ascending order; ranks()[i] belongs to sample_ids()[i].
    const std::vector<std::string>& sample_ids() const noexcept { return ids_; }
    std::span<const std::uint32_t> ranks() const noexcept { return ranks_; }

private:
    friend RankVector rank_scores(std::span<const std::string>, std::span<const double>);
    std::vector<std::string> ids_;
    std::vector<std::uint32_t> ranks_;
};

// Ranks a list of (sample id, score) pairs.  Ids must be unique and scores
// finite; the input may arrive in any order.
RankVector rank_scores(std::span<const std::string> ids, std::span<const double> scores);

// The k samples with the largest / smallest ranks.  Returned sets are
// sorted by sample id.  Requires 1 <= k <= N.
std::vector<std::string> top_k(const RankVector& ranks, std::size_t k);
std::vector<std::string> bottom_k(const RankVector& ranks, std::size_t k);

// Rank movement between two models over the same samples: delta = test rank
// minus reference rank.  Samples are ordered by (delta, sample id); the
// first k form the down-movers, the last k the up-movers.  Taking the two
// ends of one total order keeps the sets disjoint for any input, including
// the fully tied delta == 0 case, whenever 2k <= N (enforced).
// Returns (up, down), each sorted by sample id.
std::pair<std::vector<std::string>, std::vector<std::string>>
movers(const RankVector& ref, const RankVector& test, std::size_t k);

// A materialised pair of regions for one statistical test.  For TopK and
// BottomK, set_a comes from the reference model and set_b from the test
// model.  For Movers, set_a holds the up-movers and set_b the down-movers.
struct RegionPair {
    RegionKind kind = RegionKind::top_k;
    std::size_t k = 0;
    std::vector<std::string> set_a;
    std::vector<std::string> set_b;
};

RegionPair make_region_pair(RegionKind kind, const RankVector& ref, const RankVector& test,
                            std::size_t k);

} // namespace firenze
