#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fpnet/errors.hpp"
#include "fpnet/experiments.hpp"
#include "fpnet/generators.hpp"

using namespace fpnet;

namespace {

constexpr double kPi = std::numbers::pi;

const RecurrentNet kLinear{Matrix{{0.4, 0.2}, {0.8, 0.5}}};

// ff net computing (I - W)^{-1} i exactly on the positive quadrant
FeedForwardNet linear_oracle_ff() {
  const double d = 0.6 * 0.5 - 0.2 * 0.8;
  return {Matrix{{0.5 / d, 0.2 / d}, {0.8 / d, 0.6 / d}}, Matrix{{1, 0}, {0, 1}}, Vector{0, 0}, Vector{0, 0}};
}

}  // namespace

TEST_CASE("circular error wraps into (-pi, pi]") {
  CHECK(circular_error(kPi - 0.1, -kPi + 0.1) == doctest::Approx(-0.2));
  CHECK(circular_error(-kPi + 0.1, kPi - 0.1) == doctest::Approx(0.2));
  CHECK(circular_error(0.3, 0.1) == doctest::Approx(0.2));
  CHECK(circular_error(kPi, 0.0) == doctest::Approx(kPi));
  CHECK(circular_error(0.0, kPi) == doctest::Approx(kPi));
  for (double a = -7; a < 7; a += 0.37)
    for (double b = -7; b < 7; b += 0.41) {
      const double e = circular_error(a, b);
      CHECK(e > -kPi);
      CHECK(e <= kPi + 1e-12);
      CHECK(std::abs(std::remainder(a - b - e, 2 * kPi)) < 1e-9);
    }
}

TEST_CASE("peak angle and tuning width") {
  RingSpec spec;
  spec.n = 20;
  Vector r(spec.n, 0.0);
  CHECK_THROWS_AS(peak_angle(r, spec), AllZeroResponse);
  CHECK_FALSE(tuning_width(r, spec).has_value());

  r[7] = 1.0;
  CHECK(peak_angle(r, spec) == doctest::Approx(spec.theta(7)));
  CHECK(*tuning_width(r, spec) == doctest::Approx(0.0).epsilon(1e-12));

  // tie goes to the lower index
  r[3] = 1.0;
  CHECK(peak_angle(r, spec) == doctest::Approx(spec.theta(3)));

  // the inhibitory neuron is ignored
  Vector flat(spec.n, 1.0);
  flat.back() = 100;
  CHECK(*tuning_width(flat, spec) == doctest::Approx(1.0).epsilon(1e-12));

  // wider bumps have larger circular variance
  Vector narrow(spec.n, 0.0), wide(spec.n, 0.0);
  for (std::size_t j = 0; j < spec.excitatory(); ++j) {
    narrow[j] = std::exp(8 * std::cos(spec.theta(j)));
    wide[j] = std::exp(1 * std::cos(spec.theta(j)));
  }
  CHECK(*tuning_width(narrow, spec) < *tuning_width(wide, spec));
}

TEST_CASE("partition winner") {
  const PartitionSpec spec{2, 2, 2.5, 8};
  CHECK(*partition_winner(Vector{1, 1, 0, 0, 5}, spec) == 0);
  CHECK(*partition_winner(Vector{0, 0.5, 1, 0, 5}, spec) == 1);
  CHECK(*partition_winner(Vector{1, 0, 0, 1, 0}, spec) == 0);
  CHECK(*partition_winner(Vector{-3, 0.2, 0.5, 0.2, 0}, spec) == 1);
  CHECK_FALSE(partition_winner(Vector{0, 0, 0, 0, 9}, spec).has_value());
}

TEST_CASE("sample error and approx error") {
  const Vector y{1, 2}, t{2, 0};
  CHECK(sample_error(y, t) == doctest::Approx(1.5));

  Dataset empty;
  CHECK_THROWS_AS(approx_error(linear_oracle_ff(), empty), EmptyBatch);

  const auto ds = build_dataset(kLinear, UniformSampler{2, 0, 1, 2}, 20, {}, 5);
  REQUIRE(ds.inputs.size() == 20);
  CHECK(ds.provenance.at("count") == 20);
  const auto e = approx_error(linear_oracle_ff(), ds);
  CHECK(e.per_sample.size() == 20);
  CHECK(e.mean < 1e-3);
}

TEST_CASE("dataset json round trip") {
  const auto ds = build_dataset(kLinear, UniformSampler{2, -1, 1, 2}, 15, {}, 8);
  const auto back = dataset_from_json(to_json(ds));
  CHECK(back.inputs == ds.inputs);
  CHECK(back.targets == ds.targets);
  CHECK(back.all_positive == ds.all_positive);
}

TEST_CASE("report csv") {
  ExperimentReport rep;
  rep.name = "t";
  rep.columns = {"a", "b,c", "d"};
  rep.add_row({std::int64_t{3}, 0.1, std::string("x\"y")});
  rep.add_row({std::int64_t{-1}, 1e-20, std::string("")});
  CHECK(to_csv(rep) == "a,\"b,c\",d\n3,0.1,\"x\"\"y\"\n-1,1e-20,\n");
  CHECK_THROWS(rep.add_row({std::int64_t{1}}));
  CHECK(rep.column("d") == 2);
  CHECK_THROWS_AS(rep.column("zz"), std::out_of_range);
}

TEST_CASE("aggregate by group") {
  ExperimentReport rep;
  rep.columns = {"g", "v"};
  rep.add_row({std::int64_t{1}, 1.0});
  rep.add_row({std::int64_t{2}, 10.0});
  rep.add_row({std::int64_t{1}, 3.0});
  rep.add_row({std::int64_t{1}, std::string("")});
  rep.add_row({std::int64_t{1}, 8.0});
  const auto agg = aggregate(rep, "g", {"v"}, "agg");
  REQUIRE(agg.rows.size() == 2);
  const auto n = agg.column("v_n"), mean = agg.column("v_mean"), med = agg.column("v_median");
  CHECK(*ExperimentReport::number(agg.rows[0][n]) == 3);
  CHECK(*ExperimentReport::number(agg.rows[0][mean]) == doctest::Approx(4.0));
  CHECK(*ExperimentReport::number(agg.rows[0][med]) == doctest::Approx(3.0));
  CHECK(*ExperimentReport::number(agg.rows[1][mean]) == doctest::Approx(10.0));
}

TEST_CASE("mapping experiment with an exact ff net") {
  const auto rep = mapping_experiment(kLinear, linear_oracle_ff(), UniformSampler{2, -1, 1, 2}, 100, 3);
  CHECK(rep.rows.size() == 100);
  CHECK(rep.summary.at("converged") == 100);
  CHECK(rep.summary.at("median_error_all_positive") < 1e-3);
  // the csv depends only on the inputs
  CHECK(to_csv(rep) == to_csv(mapping_experiment(kLinear, linear_oracle_ff(), UniformSampler{2, -1, 1, 2}, 100, 3)));
  CHECK(to_csv(rerun_experiment(rep.config_snapshot)) == to_csv(rep));
}

TEST_CASE("competition sweep switches winner once near the middle") {
  const PartitionSpec spec{2, 2, 2.5, 8};
  const auto net = gen_partition_net(spec);
  const auto ff = init_ffnet(spec.size(), 0);
  const auto rep = competition_sweep(net, ff, spec, 21);
  CHECK(rep.rows.size() == 21);
  CHECK(rep.summary.at("winner_switches_R") == 1);
  CHECK(std::abs(rep.summary.at("first_switch_s") - 0.5) <= 0.05 + 1e-12);
  CHECK(rep.summary.at("max_active_partitions_away_from_half") == 1);
}

TEST_CASE("threshold categories") {
  const RecurrentNet spiral{Matrix{{0.70, 0.11}, {-0.54, 0.98}}};
  const auto rep = threshold_error_experiment(spiral, init_ffnet(2, 0), 200, 4);
  double total = 0;
  for (const char* c : {"near-threshold", "above", "other", "discarded"}) total += rep.summary.at(std::string(c) + "/count");
  CHECK(total == 200);
}

TEST_CASE("generalization shells") {
  const auto rep = generalization_experiment(kLinear, linear_oracle_ff(), 2.0, 30, 6);
  const auto region = rep.column("region"), scale = rep.column("scale");
  const auto i0 = rep.column("i0"), i1 = rep.column("i1");
  for (const auto& row : rep.rows) {
    if (std::get<std::string>(row[region]) == "interior") continue;
    const double s = *ExperimentReport::number(row[scale]);
    const double m = std::max(std::abs(*ExperimentReport::number(row[i0])), std::abs(*ExperimentReport::number(row[i1])));
    CHECK(m == doctest::Approx(s));
  }
  CHECK(rep.summary.count("scale=1/mean_error"));
  CHECK(rep.summary.count("scale=2/mean_error"));
}
