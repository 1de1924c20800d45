#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "doctest.h"
#include "gamspline/error.hpp"
#include "gamspline/metrics.hpp"
#include "test_util.hpp"

using namespace gamspline;
using Rational = boost::multiprecision::cpp_rational;

namespace {

struct Instance {
  Eigen::VectorXd s, y;
};

// coarse scores so ties are common
Instance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size(2, 200), levels(2, 30);
  const int n = size(rng), l = levels(rng);
  std::uniform_int_distribution<int> pick(0, l - 1);
  Instance in{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int i = 0; i < n; ++i) {
    in.y[i] = std::bernoulli_distribution(0.35)(rng) ? 1 : 0;
    in.s[i] = pick(rng) / static_cast<double>(l) + 0.1 * in.y[i];
  }
  in.y[0] = 1;
  in.y[1] = 0;
  return in;
}

double auroc_oracle(const Instance& in) {
  long twice = 0, pairs = 0;
  for (Eigen::Index i = 0; i < in.s.size(); ++i)
    for (Eigen::Index j = 0; j < in.s.size(); ++j) {
      if (in.y[i] != 1 || in.y[j] != 0) continue;
      ++pairs;
      twice += in.s[i] > in.s[j] ? 2 : in.s[i] == in.s[j] ? 1 : 0;
    }
  return static_cast<double>(twice) / static_cast<double>(2 * pairs);
}

std::vector<double> unique_desc(const Eigen::VectorXd& s) {
  std::vector<double> t(s.begin(), s.end());
  std::sort(t.begin(), t.end(), std::greater<>());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

// tp, fp of the rule s >= t
std::pair<long, long> counts(const Instance& in, double t) {
  long tp = 0, fp = 0;
  for (Eigen::Index i = 0; i < in.s.size(); ++i)
    if (in.s[i] >= t) (in.y[i] == 1 ? tp : fp)++;
  return {tp, fp};
}

Rational auprc_oracle(const Instance& in) {
  const long np = static_cast<long>(in.y.sum());
  Rational ap = 0;
  long prev = 0;
  for (double t : unique_desc(in.s)) {
    const auto [tp, fp] = counts(in, t);
    ap += Rational(tp - prev, np) * Rational(tp, tp + fp);
    prev = tp;
  }
  return ap;
}

// best threshold among observed scores; ties resolved to the lowest one
std::pair<double, Rational> f1_oracle(const Instance& in) {
  const long np = static_cast<long>(in.y.sum());
  Rational best = -1;
  double best_t = 0;
  for (double t : unique_desc(in.s)) {
    const auto [tp, fp] = counts(in, t);
    const Rational f1(2 * tp, 2 * tp + fp + (np - tp));
    if (f1 >= best) {
      best = f1;
      best_t = t;
    }
  }
  return {best_t, best};
}

}  // namespace

TEST_CASE("metrics match brute-force oracles with ties") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance in = random_instance(rng);
    CHECK(auroc(in.s, in.y) == auroc_oracle(in));
    CHECK(std::abs(auprc(in.s, in.y) - static_cast<double>(auprc_oracle(in))) < 1e-13);
    const auto [t, f1] = f1_oracle(in);
    CHECK(select_f1_threshold(in.s, in.y) == t);
    CHECK(f1_at_threshold(in.s, in.y, t) == static_cast<double>(f1));
  }
}

TEST_CASE("hand-worked values") {
  const Eigen::Vector4d s(0.1, 0.4, 0.35, 0.8), y(0, 0, 1, 1);
  CHECK(auroc(s, y) == 0.75);
  CHECK(auprc(s, y) == doctest::Approx(0.5 * 1.0 + 0.5 * (2.0 / 3.0)));
  CHECK(f1_at_threshold(s, y, 0.5) == doctest::Approx(2.0 / 3.0));
  CHECK(select_f1_threshold(s, y) == 0.35);
  const Eigen::Vector4d flat(0.5, 0.5, 0.5, 0.5);
  CHECK(auroc(flat, y) == 0.5);
  CHECK(auprc(flat, y) == 0.5);
}

TEST_CASE("perfect and constant rankings") {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance in = random_instance(rng);
    CHECK(auprc(in.y, in.y) == 1.0);
    CHECK(auroc(in.y, in.y) == 1.0);
    const Eigen::VectorXd flat = Eigen::VectorXd::Constant(in.s.size(), 0.3);
    CHECK(auprc(flat, in.y) == in.y.sum() / static_cast<double>(in.y.size()));
    BootstrapOptions opts;
    opts.n_boot = 50;
    const auto ci = bootstrap_ci(flat, in.y, Metric::kAuroc, opts);
    CHECK(ci.low == 0.5);
    CHECK(ci.high == 0.5);
  }
}

TEST_CASE("invariances") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 30; ++trial) {
    const Instance in = random_instance(rng);
    const Eigen::VectorXd mono = 4.0 * in.s;  // exact, so no ties merge
    CHECK(auroc(mono, in.y) == auroc(in.s, in.y));
    CHECK(auprc(mono, in.y) == auprc(in.s, in.y));
    // flipping the score order and the labels leaves AUROC unchanged
    const Eigen::VectorXd flipped = 1.0 - in.y.array();
    CHECK(std::abs(auroc(-in.s, flipped) - auroc(in.s, in.y)) < 1e-15);
    CHECK(std::abs(auroc(-in.s, in.y) - (1.0 - auroc(in.s, in.y))) < 1e-15);
    // row permutation
    std::vector<Eigen::Index> perm(in.s.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::VectorXd ps(perm.size()), py(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      ps[i] = in.s[perm[i]];
      py[i] = in.y[perm[i]];
    }
    CHECK(auroc(ps, py) == auroc(in.s, in.y));
    CHECK(auprc(ps, py) == auprc(in.s, in.y));
  }
}

TEST_CASE("undefined metrics") {
  const Eigen::Vector3d s(0.1, 0.2, 0.3), ones(1, 1, 1), zeros(0, 0, 0), bad(0, 2, 1);
  CHECK_THROWS_AS(auroc(s, ones), Error);
  CHECK_THROWS_AS(auprc(s, zeros), Error);
  CHECK_THROWS_AS(auroc(s, bad), Error);
  CHECK_THROWS_AS(auroc(s, Eigen::Vector2d(0, 1)), Error);
  try {
    auroc(s, zeros);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUndefinedMetric);
  }
}

TEST_CASE("bootstrap is seeded and per-replicate") {
  std::mt19937_64 rng(103);
  const Instance in = random_instance(rng);
  BootstrapOptions opts;
  opts.n_boot = 200;
  opts.seed = 42;
  const auto a = bootstrap_ci(in.s, in.y, Metric::kAuroc, opts);
  const auto b = bootstrap_ci(in.s, in.y, Metric::kAuroc, opts);
  CHECK(a.low == b.low);
  CHECK(a.high == b.high);
  CHECK(a.low <= a.high);
  opts.seed = 43;
  const auto c = bootstrap_ci(in.s, in.y, Metric::kAuroc, opts);
  CHECK((c.low != a.low || c.high != a.high));
  // replicate b draws from seed_seq{seed low, seed high, b}
  opts.seed = (std::uint64_t{7} << 32) | 42;
  for (std::uint32_t b : {0u, 5u}) {
    std::seed_seq seq{42u, 7u, b};
    std::mt19937_64 r(seq);
    std::uniform_int_distribution<Eigen::Index> pick(0, in.s.size() - 1);
    Eigen::VectorXd rs(in.s.size()), ry(in.s.size());
    for (Eigen::Index i = 0; i < in.s.size(); ++i) {
      const Eigen::Index k = pick(r);
      rs[i] = in.s[k];
      ry[i] = in.y[k];
    }
    opts.n_boot = static_cast<int>(b) + 1;
    opts.level = 0.5;
    if (b == 0) {
      const auto one = bootstrap_ci(in.s, in.y, Metric::kAuprc, opts);
      CHECK(one.low == auprc(rs, ry));
      CHECK(one.high == auprc(rs, ry));
    } else {
      // with level -> 0 the interval collapses to the median; just check membership
      opts.level = 0.999;
      const auto many = bootstrap_ci(in.s, in.y, Metric::kAuprc, opts);
      CHECK(many.low <= auprc(rs, ry));
      CHECK(auprc(rs, ry) <= many.high);
    }
  }
}

TEST_CASE("degenerate bootstrap is reported") {
  // two rows: about half of all resamples hold a single class
  const Eigen::Vector2d s(0.2, 0.7), y(0, 1);
  BootstrapOptions opts;
  opts.n_boot = 9;
  int unstable = 0, stable = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    opts.seed = seed;
    try {
      const auto ci = bootstrap_ci(s, y, Metric::kAuroc, opts);
      CHECK(2 * ci.skipped_replicates <= opts.n_boot);
      CHECK(ci.valid_replicates + ci.skipped_replicates == opts.n_boot);
      ++stable;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kUnstableCi);
      ++unstable;
      EvaluationOptions eo;
      eo.bootstrap = opts;
      const MetricReport r = evaluate_metrics(s, y, eo);
      REQUIRE(r.auroc);
      CHECK(r.auroc->point == 1.0);
      CHECK_FALSE(r.auroc->ci);
      CHECK_FALSE(r.notes.empty());
    }
  }
  CHECK(unstable > 0);
  CHECK(stable > 0);
}

TEST_CASE("percentile intervals cover the population AUROC") {
  // binormal scores: AUROC = Phi(1 / sqrt 2)
  const double truth = 0.5 * std::erfc(-0.5);
  std::mt19937_64 rng(104);
  std::normal_distribution<double> z;
  int covered = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd s(300), y(300);
    for (int i = 0; i < 300; ++i) {
      y[i] = i % 2;
      s[i] = z(rng) + y[i];
    }
    BootstrapOptions opts;
    opts.n_boot = 200;
    opts.seed = static_cast<std::uint64_t>(rep);
    const auto ci = bootstrap_ci(s, y, Metric::kAuroc, opts);
    if (ci.low <= truth && truth <= ci.high) ++covered;
  }
  CHECK(covered >= 90);
}

TEST_CASE("report and subgroups") {
  std::mt19937_64 rng(105);
  std::normal_distribution<double> z;
  const int n = 600;
  Eigen::VectorXd s(n), y(n);
  std::map<std::string, std::vector<std::string>> tags;
  for (int i = 0; i < n; ++i) {
    y[i] = std::bernoulli_distribution(0.4)(rng);
    const bool weak = i % 3 == 0;
    s[i] = z(rng) + (weak ? 0.2 : 1.5) * y[i];
    tags["site"].push_back(weak ? "b" : "a");
  }
  tags["single"] = std::vector<std::string>(n, "x");
  tags["single"][0] = "lonely";
  EvaluationOptions opts;
  opts.bootstrap.n_boot = 100;
  const MetricReport all = evaluate_metrics(s, y, opts);
  REQUIRE(all.auroc);
  REQUIRE(all.auroc->ci);
  CHECK(all.auroc->ci->low <= all.auroc->point);
  CHECK(all.auroc->point <= all.auroc->ci->high);
  CHECK(all.n_rows == n);

  const auto groups = subgroup_report(s, y, tags, "site", opts);
  REQUIRE(groups.size() == 2);
  CHECK(*groups[0].subgroup_value == "a");
  CHECK(groups[0].n_rows + groups[1].n_rows == n);
  CHECK(groups[1].auroc->point < groups[0].auroc->point);

  const auto lonely = subgroup_report(s, y, tags, "single", opts);
  REQUIRE(lonely.size() == 2);
  CHECK(*lonely[0].subgroup_value == "lonely");
  CHECK_FALSE(lonely[0].auroc);
  CHECK_THROWS_AS(subgroup_report(s, y, tags, "missing", opts), Error);
}
