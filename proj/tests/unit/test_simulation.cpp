#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "nsgev/error.hpp"
#include "nsgev/simulation.hpp"

using namespace nsgev;

namespace {

SimDesign small_design(std::size_t reps) {
  auto d = SimDesign::gev11();
  d.xi_grid = {-0.25, 0.15};
  d.replicates = reps;
  d.threads = 1;
  return d;
}

std::map<std::tuple<std::string, int, double, int>, SimCell> index(const SimReport& r) {
  std::map<std::tuple<std::string, int, double, int>, SimCell> m;
  for (const auto& c : r.cells) m[{c.measure, static_cast<int>(c.method), c.xi, static_cast<int>(c.target)}] = c;
  return m;
}

}  // namespace

TEST(Simulation, SingleReplicateHasZeroSe) {
  const auto r = run_simulation(small_design(1), {Method::prop, Method::lme_sta_gev}, 1);
  const auto m = index(r);
  for (const auto& c : r.cells) {
    if (c.measure != "se") continue;
    EXPECT_EQ(c.value, 0.0);
    const auto& bias = m.at({"bias", static_cast<int>(c.method), c.xi, static_cast<int>(c.target)});
    const auto& rmse = m.at({"rmse", static_cast<int>(c.method), c.xi, static_cast<int>(c.target)});
    EXPECT_NEAR(rmse.value, std::abs(bias.value), 1e-12);
  }
}

TEST(Simulation, RmseDecomposes) {
  const auto r = run_simulation(small_design(40), default_sim_methods(), 2);
  ASSERT_EQ(r.cells.size(), 5u * 2 * 2 * 3);
  const auto m = index(r);
  for (const auto& c : r.cells) {
    if (c.measure != "rmse") continue;
    const auto& bias = m.at({"bias", static_cast<int>(c.method), c.xi, static_cast<int>(c.target)});
    const auto& se = m.at({"se", static_cast<int>(c.method), c.xi, static_cast<int>(c.target)});
    EXPECT_NEAR(c.value * c.value, bias.value * bias.value + se.value * se.value, 1e-9 * (1 + c.value * c.value));
  }
}

TEST(Simulation, ByteIdenticalAcrossThreadCounts) {
  auto d = small_design(12);
  d.keep_replicates = true;
  const auto a = run_simulation(d, default_sim_methods(), 9);
  d.threads = 3;
  const auto b = run_simulation(d, default_sim_methods(), 9);
  EXPECT_EQ(sim_report_csv(a), sim_report_csv(b));
  EXPECT_EQ(sim_replicates_csv(a), sim_replicates_csv(b));
  EXPECT_EQ(a.replicate_rows.size(), 12u * 2 * 5);
  EXPECT_NE(sim_report_csv(a), sim_report_csv(run_simulation(small_design(12), default_sim_methods(), 10)));
}

TEST(Simulation, TrueRlTable) {
  const auto t = true_rl_table(SimDesign::gev11());
  ASSERT_EQ(t.size(), 9u);
  EXPECT_NEAR(t.front().conventional, 79.51, 0.02);
  EXPECT_NEAR(t.back().parey, 7.66, 0.02);
  const auto g10 = true_rl_table(SimDesign::gev10());
  const auto g20 = true_rl_table(SimDesign::gev20());
  EXPECT_EQ(g10.size(), 9u);
  for (const auto& row : g20) EXPECT_TRUE(std::isfinite(row.conventional) && std::isfinite(row.parey));
}

TEST(Simulation, CsvShape) {
  const auto r = run_simulation(small_design(3), {Method::wls}, 1);
  const auto csv = sim_report_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "measure,method,xi,n,target,value,failures,true_rl");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(Simulation, RejectsBadDesigns) {
  auto d = small_design(0);
  EXPECT_THROW(run_simulation(d, default_sim_methods(), 1), Error);
  EXPECT_THROW(run_simulation(small_design(2), {}, 1), DomainError);
}
