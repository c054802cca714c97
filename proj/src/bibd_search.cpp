#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "octopus/error.hpp"
#include "octopus/topology.hpp"

namespace octopus {
namespace {

using Row = std::vector<std::uint64_t>;

// Exact-cover style search over point pairs. Each step picks the pair that
// still needs coverage and has the fewest common open partners (ties go to
// the lexicographically smallest pair), then tries every block through that
// pair in ascending order. The first block is fixed to {0, .., k-1}; for
// lambda = 1 the remaining blocks through point 0 are fixed as consecutive
// runs as well, since any design can be relabelled that way.
class BibdSearch {
 public:
  BibdSearch(const BibdParams& params, std::uint64_t budget)
      : p_(params),
        budget_(budget),
        words_((params.v + 63) / 64),
        degree_left_(params.v, params.r),
        pair_left_(static_cast<std::size_t>(params.v) * params.v,
                   static_cast<std::uint16_t>(params.lambda)),
        open_(static_cast<std::size_t>(params.v) * words_, 0) {
    for (int x = 0; x < p_.v; ++x) {
      for (int y = 0; y < p_.v; ++y) {
        if (x != y) set_open(x, y, true);
      }
    }
  }

  bool run() {
    std::vector<int> block(p_.k);
    for (int i = 0; i < p_.k; ++i) block[i] = i;
    ++nodes_;
    place(block);
    if (p_.lambda == 1) {
      // Blocks through point 0: {0, k .. 2k-2}, {0, 2k-1 .. 3k-3}, ...
      int next = p_.k;
      for (int j = 1; j < p_.r; ++j) {
        block[0] = 0;
        for (int i = 1; i < p_.k; ++i) block[i] = next++;
        ++nodes_;
        place(block);
      }
    }
    return solve();
  }

  std::uint64_t nodes() const { return nodes_; }
  bool budget_hit() const { return budget_hit_; }

  // Blocks in canonical (sorted) order.
  std::vector<std::vector<int>> blocks() const {
    auto sorted = blocks_;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  }

 private:
  std::uint16_t& pair(int a, int b) {
    return pair_left_[static_cast<std::size_t>(a) * p_.v + b];
  }

  const std::uint64_t* open_row(int x) const {
    return &open_[static_cast<std::size_t>(x) * words_];
  }

  bool is_open(int x, int y) const {
    return (open_row(x)[y / 64] >> (y % 64)) & 1;
  }

  void set_open(int x, int y, bool on) {
    auto& word = open_[static_cast<std::size_t>(x) * words_ + y / 64];
    const std::uint64_t bit = std::uint64_t{1} << (y % 64);
    word = on ? (word | bit) : (word & ~bit);
  }

  void place(const std::vector<int>& block) {
    for (int i = 0; i < p_.k; ++i) {
      --degree_left_[block[i]];
      for (int j = i + 1; j < p_.k; ++j) {
        const int a = block[i];
        const int b = block[j];
        if (--pair(a, b) == 0) {
          set_open(a, b, false);
          set_open(b, a, false);
        }
        --pair(b, a);
      }
    }
    blocks_.push_back(block);
  }

  void unplace() {
    const auto block = blocks_.back();
    blocks_.pop_back();
    for (int i = 0; i < p_.k; ++i) {
      ++degree_left_[block[i]];
      for (int j = i + 1; j < p_.k; ++j) {
        const int a = block[i];
        const int b = block[j];
        if (pair(a, b)++ == 0) {
          set_open(a, b, true);
          set_open(b, a, true);
        }
        ++pair(b, a);
      }
    }
  }

  // Branching score for an open pair: the number of open edges among its
  // common open partners when blocks need two or more further points (exact
  // block count for k = 4), else the partner count. Zero means no block
  // through the pair can be completed.
  int pair_score(int x, int y, Row& common) const {
    const std::uint64_t* ux = open_row(x);
    const std::uint64_t* uy = open_row(y);
    int size = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      common[w] = ux[w] & uy[w];
      size += std::popcount(common[w]);
    }
    const int need = p_.k - 2;
    if (size < need) return 0;
    if (need <= 1) return need == 0 ? 1 : size;
    int edges = 0;
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t word = common[w];
      while (word != 0) {
        const int c = static_cast<int>(w * 64) + std::countr_zero(word);
        word &= word - 1;
        const std::uint64_t* uc = open_row(c);
        for (std::size_t i = 0; i < words_; ++i) {
          edges += std::popcount(common[i] & uc[i]);
        }
      }
    }
    return edges / 2;
  }

  bool solve() {
    if (static_cast<int>(blocks_.size()) == p_.b) return true;

    int best_x = -1;
    int best_y = -1;
    int best = -1;
    Row common(words_);
    for (int x = 0; x < p_.v && best != 0; ++x) {
      if (degree_left_[x] == 0) continue;
      for (int y = x + 1; y < p_.v; ++y) {
        if (!is_open(x, y)) continue;
        const int score = pair_score(x, y, common);
        if (best < 0 || score < best) {
          best = score;
          best_x = x;
          best_y = y;
          if (best <= 1) break;
        }
      }
      if (best == 1) break;
    }
    if (best_x < 0 || best == 0) return false;

    Row candidates(words_);
    const std::uint64_t* ux = open_row(best_x);
    const std::uint64_t* uy = open_row(best_y);
    for (std::size_t w = 0; w < words_; ++w) candidates[w] = ux[w] & uy[w];
    std::vector<int> block{best_x, best_y};
    return extend(block, candidates);
  }

  // Grows `block` from `candidates` (points open to every member so far,
  // all above the last chosen one) until it has k points.
  bool extend(std::vector<int>& block, const Row& candidates) {
    if (static_cast<int>(block.size()) == p_.k) {
      std::vector<int> sorted = block;
      std::sort(sorted.begin(), sorted.end());
      place(sorted);
      if (solve()) return true;
      unplace();
      return false;
    }
    const int still_needed = p_.k - static_cast<int>(block.size());
    int available = 0;
    for (auto word : candidates) available += std::popcount(word);
    if (available < still_needed) return false;

    Row rest = candidates;
    for (std::size_t w = 0; w < words_; ++w) {
      while (rest[w] != 0) {
        const int bit = std::countr_zero(rest[w]);
        rest[w] &= rest[w] - 1;
        const int cand = static_cast<int>(w * 64) + bit;
        if (++nodes_ > budget_) {
          budget_hit_ = true;
          return false;
        }
        // Later picks come from points open to cand and above it.
        Row next(words_);
        const std::uint64_t* uc = open_row(cand);
        for (std::size_t i = 0; i < words_; ++i) next[i] = rest[i] & uc[i];
        block.push_back(cand);
        if (extend(block, next)) return true;
        block.pop_back();
        if (budget_hit_) return false;
      }
    }
    return false;
  }

  BibdParams p_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool budget_hit_ = false;
  std::size_t words_;
  std::vector<int> degree_left_;
  std::vector<std::uint16_t> pair_left_;
  // Row x marks the points y whose pair with x still needs coverage.
  Row open_;
  std::vector<std::vector<int>> blocks_;
};

}  // namespace

PodTopology construct(const BibdParams& params, std::uint64_t search_budget,
                      SearchStats* stats) {
  if (!params.satisfies_identities()) {
    throw Error(ErrorCode::IndivisibleParams,
                "parameters violate b*k = v*r or lambda*(v-1) = r*(k-1)");
  }
  if (params.k > params.v || params.k < 2 || params.lambda > 0xFFFF) {
    throw Error(ErrorCode::NoDesignExists,
                "block size must lie in [2, v] for a design to exist");
  }

  BibdSearch search(params, search_budget);
  const bool found = search.run();
  if (stats) stats->nodes_expanded = search.nodes();
  if (!found) {
    if (search.budget_hit()) {
      throw SearchExhausted(search.nodes(),
                            "search budget exhausted after " +
                                std::to_string(search.nodes()) +
                                " node expansions");
    }
    throw Error(ErrorCode::NoDesignExists,
                "no design exists (search tree exhausted after " +
                    std::to_string(search.nodes()) + " node expansions)");
  }

  const auto blocks = search.blocks();
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(params.b) * params.k);
  for (std::size_t m = 0; m < blocks.size(); ++m) {
    for (int host : blocks[m]) {
      edges.push_back({HostId{static_cast<std::size_t>(host)}, MhdId{m}});
    }
  }
  const auto kind = params.lambda == 1 ? TopologyKind::RegularOctopus
                                       : TopologyKind::DenseOctopus;
  return PodTopology(kind, params.v, params.b, std::move(edges), params);
}

}  // namespace octopus
