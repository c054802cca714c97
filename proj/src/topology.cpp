#include "octopus/topology.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "octopus/error.hpp"

namespace octopus {

std::string_view to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Symmetric:
      return "symmetric";
    case TopologyKind::RegularOctopus:
      return "regular";
    case TopologyKind::DenseOctopus:
      return "dense";
  }
  return "unknown";
}

std::optional<TopologyKind> parse_topology_kind(std::string_view text) {
  if (text == "symmetric") return TopologyKind::Symmetric;
  if (text == "regular") return TopologyKind::RegularOctopus;
  if (text == "dense") return TopologyKind::DenseOctopus;
  return std::nullopt;
}

bool BibdParams::satisfies_identities() const {
  if (v <= 0 || b <= 0 || r <= 0 || k <= 0 || lambda <= 0) return false;
  return static_cast<long long>(b) * k == static_cast<long long>(v) * r &&
         static_cast<long long>(lambda) * (v - 1) ==
             static_cast<long long>(r) * (k - 1);
}

BibdParams derive_regular_params(int host_ports, int mhd_ports) {
  if (host_ports < 1 || mhd_ports < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "regular Octopus needs X >= 1 and N >= 2");
  }
  const long long v = 1 + static_cast<long long>(host_ports) * (mhd_ports - 1);
  const long long edges = v * host_ports;
  if (edges % mhd_ports != 0) {
    throw Error(ErrorCode::IndivisibleParams,
                "H*X = " + std::to_string(edges) + " is not divisible by N = " +
                    std::to_string(mhd_ports));
  }
  return BibdParams{static_cast<int>(v), static_cast<int>(edges / mhd_ports),
                    host_ports, mhd_ports, 1};
}

BibdParams derive_dense_params(int host_ports, int mhd_ports, int lambda) {
  if (host_ports < 1 || mhd_ports < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "dense Octopus needs X >= 1 and N >= 2");
  }
  if (lambda < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "dense Octopus needs lambda >= 2 (lambda = 1 is regular)");
  }
  const long long spokes = static_cast<long long>(host_ports) * (mhd_ports - 1);
  if (spokes % lambda != 0) {
    throw Error(ErrorCode::IndivisibleParams,
                "lambda = " + std::to_string(lambda) +
                    " does not divide X*(N-1) = " + std::to_string(spokes));
  }
  const long long v = 1 + spokes / lambda;
  const long long edges = v * host_ports;
  if (edges % mhd_ports != 0) {
    throw Error(ErrorCode::IndivisibleParams,
                "H*X = " + std::to_string(edges) + " is not divisible by N = " +
                    std::to_string(mhd_ports));
  }
  const long long b = edges / mhd_ports;
  if (b < v) {
    throw Error(ErrorCode::FisherViolation,
                "M = " + std::to_string(b) + " < H = " + std::to_string(v));
  }
  return BibdParams{static_cast<int>(v), static_cast<int>(b), host_ports,
                    mhd_ports, lambda};
}

PodTopology::PodTopology(TopologyKind kind, std::size_t host_count,
                         std::size_t mhd_count, std::vector<Edge> edges,
                         std::optional<BibdParams> params, int multiplicity)
    : kind_(kind),
      edges_(std::move(edges)),
      params_(params),
      multiplicity_(multiplicity),
      host_adj_(host_count),
      mhd_adj_(mhd_count) {
  if (multiplicity_ < 1) {
    throw Error(ErrorCode::InvalidArgument, "edge multiplicity must be >= 1");
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw Error(ErrorCode::InvalidArgument,
                "duplicate edge; use multiplicity for parallel cables");
  }
  for (const Edge& e : edges_) {
    if (e.host.index >= host_count || e.mhd.index >= mhd_count) {
      throw Error(ErrorCode::InvalidArgument, "edge endpoint out of range");
    }
    host_adj_[e.host.index].push_back(e.mhd);
    mhd_adj_[e.mhd.index].push_back(e.host);
  }
  for (auto& hosts : mhd_adj_) std::sort(hosts.begin(), hosts.end());
}

int PodTopology::host_ports() const {
  if (params_) return params_->r;
  return host_adj_.empty() ? 0 : static_cast<int>(host_adj_.front().size());
}

int PodTopology::mhd_ports() const {
  if (params_) return params_->k;
  return mhd_adj_.empty() ? 0 : static_cast<int>(mhd_adj_.front().size());
}

const std::vector<MhdId>& PodTopology::mhds_of(HostId host) const {
  if (host.index >= host_adj_.size()) {
    throw Error(ErrorCode::UnknownHost, "unknown host " + host_name(host));
  }
  return host_adj_[host.index];
}

const std::vector<HostId>& PodTopology::hosts_of(MhdId mhd) const {
  if (mhd.index >= mhd_adj_.size()) {
    throw Error(ErrorCode::InvalidArgument, "unknown MHD " + mhd_name(mhd));
  }
  return mhd_adj_[mhd.index];
}

bool PodTopology::connected(HostId host, MhdId mhd) const {
  const auto& mhds = mhds_of(host);
  return std::binary_search(mhds.begin(), mhds.end(), mhd);
}

namespace {

std::optional<std::size_t> parse_name(std::string_view name, char prefix,
                                      std::size_t limit) {
  if (name.size() < 2 || name.front() != prefix) return std::nullopt;
  std::size_t one_based = 0;
  const char* first = name.data() + 1;
  const char* last = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(first, last, one_based);
  if (ec != std::errc() || ptr != last || one_based == 0 || one_based > limit) {
    return std::nullopt;
  }
  return one_based - 1;
}

}  // namespace

std::optional<HostId> PodTopology::find_host(std::string_view name) const {
  if (auto idx = parse_name(name, 'H', host_count())) return HostId{*idx};
  return std::nullopt;
}

std::optional<MhdId> PodTopology::find_mhd(std::string_view name) const {
  if (auto idx = parse_name(name, 'P', mhd_count())) return MhdId{*idx};
  return std::nullopt;
}

std::string host_name(HostId host) { return "H" + std::to_string(host.index + 1); }
std::string mhd_name(MhdId mhd) { return "P" + std::to_string(mhd.index + 1); }

PodTopology construct_symmetric(int host_count, int mhd_count) {
  if (host_count < 1 || mhd_count < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "symmetric pod needs at least one host and one MHD");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(host_count) * mhd_count);
  for (int h = 0; h < host_count; ++h) {
    for (int m = 0; m < mhd_count; ++m) {
      edges.push_back({HostId{static_cast<std::size_t>(h)},
                       MhdId{static_cast<std::size_t>(m)}});
    }
  }
  return PodTopology(TopologyKind::Symmetric, host_count, mhd_count,
                     std::move(edges), std::nullopt);
}

PodTopology with_multiplicity(const PodTopology& topology, int multiplicity) {
  return PodTopology(topology.kind(), topology.host_count(),
                     topology.mhd_count(), topology.edges(), topology.params(),
                     multiplicity);
}

std::vector<MhdId> common_mhds(const PodTopology& topology, HostId a, HostId b) {
  if (a == b) {
    throw Error(ErrorCode::InvalidArgument,
                "common_mhds needs two distinct hosts");
  }
  const auto& lhs = topology.mhds_of(a);
  const auto& rhs = topology.mhds_of(b);
  std::vector<MhdId> shared;
  std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                        std::back_inserter(shared));
  return shared;
}

ValidationReport validate(const PodTopology& topology) {
  ValidationReport report;
  const std::size_t hosts = topology.host_count();
  const std::size_t mhds = topology.mhd_count();

  if (const auto& p = topology.params()) {
    report.expected_host_degree = p->r;
    report.expected_mhd_degree = p->k;
    report.expected_lambda = p->lambda;
    report.edge_count_ok =
        p->satisfies_identities() && static_cast<std::size_t>(p->v) == hosts &&
        static_cast<std::size_t>(p->b) == mhds &&
        topology.edges().size() == static_cast<std::size_t>(p->v) * p->r &&
        topology.edges().size() == static_cast<std::size_t>(p->b) * p->k;
  } else {
    // Complete bipartite: every pair of hosts shares all X MHDs.
    report.expected_host_degree = static_cast<int>(mhds);
    report.expected_mhd_degree = static_cast<int>(hosts);
    report.expected_lambda = static_cast<int>(mhds);
    report.edge_count_ok = topology.edges().size() == hosts * mhds;
  }

  for (std::size_t h = 0; h < hosts; ++h) {
    if (static_cast<int>(topology.mhds_of(HostId{h}).size()) !=
        report.expected_host_degree) {
      report.host_degree_violations.push_back(HostId{h});
    }
  }
  for (std::size_t m = 0; m < mhds; ++m) {
    if (static_cast<int>(topology.hosts_of(MhdId{m}).size()) !=
        report.expected_mhd_degree) {
      report.mhd_degree_violations.push_back(MhdId{m});
    }
  }

  std::vector<int> shared(hosts * hosts, 0);
  for (std::size_t m = 0; m < mhds; ++m) {
    const auto& members = topology.hosts_of(MhdId{m});
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        ++shared[members[i].index * hosts + members[j].index];
      }
    }
  }
  for (std::size_t a = 0; a < hosts; ++a) {
    for (std::size_t b = a + 1; b < hosts; ++b) {
      const int count = shared[a * hosts + b];
      if (count != report.expected_lambda) {
        report.pair_violations.push_back({HostId{a}, HostId{b}, count});
      }
      if (count == 0) report.unreachable_pairs.emplace_back(HostId{a}, HostId{b});
    }
  }
  return report;
}

}  // namespace octopus
