#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "octopus/cli.hpp"

using namespace octopus::cli;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) {
  return std::string(OCTOPUS_FIXTURES) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("octopus_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
    return path(name);
  }

  std::ostringstream out, err;
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, DesignRoundTripsThroughValidate) {
  DesignOptions d;
  d.host_ports = 4;
  d.mhd_ports = 4;
  d.output = path("pod.json");
  ASSERT_EQ(cmd_design(d, out, err), kOk) << err.str();
  EXPECT_EQ(slurp(*d.output), slurp(fixture("regular13.json")));
  EXPECT_EQ(cmd_validate(*d.output, out, err), kOk);
  EXPECT_NE(out.str().find("VALID"), std::string::npos);
}

TEST_F(Cli, DesignIsDeterministic) {
  DesignOptions d;
  d.kind = "dense";
  d.host_ports = 4;
  d.mhd_ports = 4;
  d.lambda = 2;
  std::ostringstream a, b;
  ASSERT_EQ(cmd_design(d, a, err), kOk);
  ASSERT_EQ(cmd_design(d, b, err), kOk);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), slurp(fixture("dense7.json")));
}

TEST_F(Cli, DesignDotAndSymmetric) {
  DesignOptions d;
  d.kind = "symmetric";
  d.host_ports = 4;
  d.mhd_ports = 8;
  d.format = "dot";
  ASSERT_EQ(cmd_design(d, out, err), kOk);
  EXPECT_NE(out.str().find("H8 -- P4"), std::string::npos);
}

TEST_F(Cli, DesignErrorCodes) {
  DesignOptions d;
  d.host_ports = 2;
  d.mhd_ports = 4;
  EXPECT_EQ(cmd_design(d, out, err), kIndivisibleParams);
  d.kind = "dense";
  d.host_ports = 2;
  d.mhd_ports = 5;
  d.lambda = 2;
  EXPECT_EQ(cmd_design(d, out, err), kFisherViolation);
  DesignOptions tight;
  tight.host_ports = 8;
  tight.mhd_ports = 8;
  tight.budget = 5;
  EXPECT_EQ(cmd_design(tight, out, err), kSearchExhausted);
  DesignOptions bad;
  bad.kind = "sparse";
  bad.host_ports = 2;
  bad.mhd_ports = 2;
  EXPECT_EQ(cmd_design(bad, out, err), kUsage);
}

TEST_F(Cli, ValidateFailures) {
  EXPECT_EQ(cmd_validate(fixture("triangle_broken.json"), out, err), kValidationFailed);
  EXPECT_EQ(cmd_validate(path("missing.json"), out, err), kInputError);
  EXPECT_EQ(cmd_validate(write("junk.json", "{oops"), out, err), kInputError);
}

TEST_F(Cli, CostTable) {
  CostOptions c;
  ASSERT_EQ(cmd_cost(c, out, err), kOk);
  EXPECT_NE(out.str().find("4263"), std::string::npos);
  CostOptions empty;
  empty.format = "csv";
  empty.config = write("cfg.json", "{\"skus\": []}");
  std::ostringstream e;
  ASSERT_EQ(cmd_cost(empty, e, err), kOk);
  EXPECT_EQ(e.str(),
            "sku,cxl_ports,ddr5_channels,die_area_mm2,unused_area_mm2,good_dies,"
            "relative_cost_pct,unit_cost,latency_ns\n");
}

TEST_F(Cli, SweepWritesFrontier) {
  SweepOptions s;
  s.configs = fixture("table2.json");
  s.output = path("sweep.csv");
  s.frontier_output = path("frontier.csv");
  ASSERT_EQ(cmd_sweep(s, out, err), kOk) << err.str();
  EXPECT_NE(slurp(*s.output).find("8,regular,8,8,57,57,Large,1600,"), std::string::npos);
  const std::string frontier = slurp(*s.frontier_output);
  EXPECT_EQ(frontier,
            "config,kind,N,X,pod_size,mhd_count,sku,cost_per_host,note\n"
            "2,regular,2,2,3,3,XSmall,300,\n"
            "3,regular,2,4,5,10,XSmall,600,\n"
            "5,regular,4,4,13,13,Small,670,\n"
            "6,regular,4,8,25,50,Small,1340,\n"
            "8,regular,8,8,57,57,Large,1600,\n");
}

TEST_F(Cli, SweepReportsSkips) {
  SweepOptions s;
  s.configs = write("c.json", R"([{"id":"x","kind":"regular","X":2,"N":4,"sku":"Small"}])");
  ASSERT_EQ(cmd_sweep(s, out, err), kOk);
  EXPECT_NE(err.str().find("config x skipped"), std::string::npos);
}

TEST_F(Cli, SimulateWorkedTrace) {
  SimulateOptions s;
  s.topology = fixture("triangle.json");
  s.trace = fixture("triangle_trace_100.jsonl");
  s.capacity_gb = "100";
  ASSERT_EQ(cmd_simulate(s, out, err), kOk) << err.str();
  EXPECT_NE(out.str().find("\"200/3\""), std::string::npos) << out.str();
  s.trace = fixture("bad_trace.jsonl");
  std::ostringstream e;
  EXPECT_EQ(cmd_simulate(s, out, e), kMalformedTrace);
  EXPECT_NE(e.str().find("line 2"), std::string::npos);
  s.trace = fixture("bad_free.jsonl");
  EXPECT_EQ(cmd_simulate(s, out, err), kMalformedTrace);
}

TEST_F(Cli, SimulateUsesSkuCapacity) {
  SimulateOptions s;
  s.topology = fixture("triangle.json");
  s.trace = write("t.jsonl", "{\"op\":\"alloc\",\"host\":\"H1\",\"gb\":1024}\n");
  s.sku = "Large";
  ASSERT_EQ(cmd_simulate(s, out, err), kOk);
  EXPECT_NE(out.str().find("\"insufficient_capacity\": 0"), std::string::npos) << out.str();
}

TEST_F(Cli, Placement) {
  PlacementOptions p;
  p.topology = fixture("regular13.json");
  ASSERT_EQ(cmd_placement(p, out, err), kOk);
  EXPECT_NE(out.str().find("\"regions\""), std::string::npos);
  p.topology = fixture("dense7.json");
  std::ostringstream e;
  EXPECT_EQ(cmd_placement(p, out, e), kUnsupportedTopology);
  EXPECT_NE(e.str().find("dense"), std::string::npos);
}

TEST_F(Cli, CompareHeadline) {
  CompareOptions c;
  c.configs = fixture("table2.json");
  c.baseline = "7";
  c.candidate = "6";
  ASSERT_EQ(cmd_compare(c, out, err), kOk) << err.str();
  EXPECT_NE(out.str().find("host_ratio 3.1250"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("cost_reduction_pct 16.2500"), std::string::npos);
  c.candidate = "99";
  EXPECT_EQ(cmd_compare(c, out, err), kUsage);
}

TEST_F(Cli, Curve) {
  CurveOptions c;
  ASSERT_EQ(cmd_curve(c, out, err), kOk);
  EXPECT_NE(out.str().find("regular,8,57\n"), std::string::npos);
  EXPECT_NE(out.str().find("symmetric,3,8\n"), std::string::npos);
}

TEST_F(Cli, SimulateOnShareGrid) {
  SimulateOptions s;
  s.topology = fixture("triangle.json");
  s.trace = fixture("triangle_trace_100.jsonl");
  s.capacity_gb = "100";
  s.resolution_gb = "1";
  ASSERT_EQ(cmd_simulate(s, out, err), kOk) << err.str();
  EXPECT_EQ(out.str().find("/3"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("\"gb\": \"67\""), std::string::npos);
}
