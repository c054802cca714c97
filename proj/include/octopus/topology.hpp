#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace octopus {

struct HostId {
  std::size_t index = 0;
  auto operator<=>(const HostId&) const = default;
};

struct MhdId {
  std::size_t index = 0;
  auto operator<=>(const MhdId&) const = default;
};

enum class TopologyKind { Symmetric, RegularOctopus, DenseOctopus };

std::string_view to_string(TopologyKind kind);
std::optional<TopologyKind> parse_topology_kind(std::string_view text);

// (v, b, r, k, lambda) of a balanced incomplete block design. Hosts are the
// treatments, MHDs the blocks.
struct BibdParams {
  int v = 0;  // hosts (pod size H)
  int b = 0;  // MHDs (M)
  int r = 0;  // host ports X
  int k = 0;  // MHD ports N
  int lambda = 0;

  bool satisfies_identities() const;
  bool operator==(const BibdParams&) const = default;
};

BibdParams derive_regular_params(int host_ports, int mhd_ports);
BibdParams derive_dense_params(int host_ports, int mhd_ports, int lambda);

struct Edge {
  HostId host;
  MhdId mhd;
  auto operator<=>(const Edge&) const = default;
};

// Bipartite host <-> MHD incidence graph. Immutable once built.
class PodTopology {
 public:
  PodTopology(TopologyKind kind, std::size_t host_count, std::size_t mhd_count,
              std::vector<Edge> edges, std::optional<BibdParams> params,
              int multiplicity = 1);

  TopologyKind kind() const { return kind_; }
  std::size_t host_count() const { return host_adj_.size(); }
  std::size_t mhd_count() const { return mhd_adj_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::optional<BibdParams>& params() const { return params_; }

  // Parallel-cable count on every edge; 2 models the "double up all MHDs"
  // X=8 variant of an X=4 design.
  int multiplicity() const { return multiplicity_; }

  // Ports in use per host / per MHD, counted on distinct neighbours.
  int host_ports() const;
  int mhd_ports() const;

  const std::vector<MhdId>& mhds_of(HostId host) const;
  const std::vector<HostId>& hosts_of(MhdId mhd) const;
  bool connected(HostId host, MhdId mhd) const;

  std::optional<HostId> find_host(std::string_view name) const;
  std::optional<MhdId> find_mhd(std::string_view name) const;

  bool operator==(const PodTopology& other) const {
    return kind_ == other.kind_ && edges_ == other.edges_ &&
           params_ == other.params_ && multiplicity_ == other.multiplicity_ &&
           host_count() == other.host_count() && mhd_count() == other.mhd_count();
  }

 private:
  TopologyKind kind_;
  std::vector<Edge> edges_;
  std::optional<BibdParams> params_;
  int multiplicity_;
  std::vector<std::vector<MhdId>> host_adj_;
  std::vector<std::vector<HostId>> mhd_adj_;
};

std::string host_name(HostId host);
std::string mhd_name(MhdId mhd);

PodTopology construct_symmetric(int host_count, int mhd_count);

inline constexpr std::uint64_t kDefaultSearchBudget = 50'000'000;

struct SearchStats {
  std::uint64_t nodes_expanded = 0;
};

// Backtracking BIBD construction. Blocks are filled in lexicographic order,
// points tried ascending; the first block is fixed to {0..k-1}.
// Throws SearchExhausted when the budget runs out and Error(NoDesignExists)
// when the full tree was explored without a design.
PodTopology construct(const BibdParams& params,
                      std::uint64_t search_budget = kDefaultSearchBudget,
                      SearchStats* stats = nullptr);

// Returns the doubled-up variant used when hosts have twice the ports.
PodTopology with_multiplicity(const PodTopology& topology, int multiplicity);

std::vector<MhdId> common_mhds(const PodTopology& topology, HostId a, HostId b);

struct PairViolation {
  HostId a;
  HostId b;
  int shared = 0;
};

struct ValidationReport {
  int expected_host_degree = 0;
  int expected_mhd_degree = 0;
  int expected_lambda = 0;

  std::vector<HostId> host_degree_violations;
  std::vector<MhdId> mhd_degree_violations;
  std::vector<PairViolation> pair_violations;
  std::vector<std::pair<HostId, HostId>> unreachable_pairs;
  bool edge_count_ok = true;

  bool degrees_ok() const {
    return host_degree_violations.empty() && mhd_degree_violations.empty();
  }
  bool lambda_ok() const { return pair_violations.empty(); }
  bool two_hop_ok() const { return unreachable_pairs.empty(); }
  bool passed() const {
    return degrees_ok() && lambda_ok() && two_hop_ok() && edge_count_ok;
  }
};

ValidationReport validate(const PodTopology& topology);

}  // namespace octopus
