// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "convex_certificate.hpp"
#include "dapd/adaptive.hpp"
#include "dapd/backtracking.hpp"
#include "dapd/baseline.hpp"
#include "dapd/errors.hpp"
#include "dapd/exchange.hpp"
#include "dapd/metrics.hpp"
#include "dapd/runner.hpp"
#include "dapd/suites.hpp"
#include "support.hpp"

using namespace dapd;
namespace fs = std::filesystem;

namespace {

/// Outcome of one criterion: pass unless some check failed.
struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(int id, const char* name, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %d %s: %s(%.1fs)\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.str().c_str(), secs);
  std::fflush(stdout);
  failures += !v.pass;
}

GossipMatrix mixing_for(const Graph& g) { return gossip_matrix(metropolis_weights(g), 0.5); }

RunConfig quadratic_config(GraphKind kind, double p) {
  RunConfig cfg;
  cfg.graph = {kind, 20, p, 7};
  cfg.problem.h = 110;
  cfg.problem.n = 100;
  cfg.problem.seed = 11;
  return cfg;
}

std::vector<RunTrace> strongly_convex_runs;

LossFamily heterogeneous_quadratics(std::size_t m, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::shared_ptr<const Loss>> losses;
  for (std::size_t i = 0; i < m; ++i) {
    const double scale = std::pow(3.0, static_cast<double>(i % 4));
    losses.push_back(std::make_shared<QuadraticLoss>(
        scale * test::random_matrix(rng, static_cast<Eigen::Index>(d + 2), static_cast<Eigen::Index>(d)),
        test::random_vector(rng, static_cast<Eigen::Index>(d + 2)), 0.1));
  }
  return LossFamily(losses);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void strongly_convex_convergence(Verdict& v) {
  const struct {
    GraphKind kind;
    double p;
    std::size_t budget;
  } cases[] = {{GraphKind::erdos_renyi, 0.5, 5000},
               {GraphKind::erdos_renyi, 0.1, 20000},
               {GraphKind::line, 0.0, 60000}};
  for (const auto& c : cases) {
    RunConfig cfg = quadratic_config(c.kind, c.p);
    cfg.max_vector_rounds = c.budget;
    const RunTrace t = run(cfg);
    const std::string label = graph_label(cfg.graph);
    v.detail << label << " " << t.vector_rounds << "/" << c.budget << " rounds ";
    v.require(t.status == RunStatus::converged, label + " did not converge within budget");
    v.require(t.wall_seconds < 120.0, label + " slower than 2 minutes");
    strongly_convex_runs.push_back(t);
  }
}

void linear_rate(Verdict& v) {
  v.require(!strongly_convex_runs.empty(), "no strongly convex runs");
  for (const RunTrace& t : strongly_convex_runs) {
    if (t.status != RunStatus::converged) continue;
    std::vector<std::pair<long, double>> series;
    for (const MeritRow& r : t.rows) series.emplace_back(r.k, r.V);
    const double slope = linear_rate_fit(series);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e ", slope);
    v.detail << "slope " << buf;
    v.require(slope < -1e-4, "slope not below -1e-4");
  }
}

void convex_sublinear(Verdict& v) {
  RunConfig cfg = test::convex_certificate_config();
  cfg.problem.surrogate = true;
  const auto cert = test::convex_certificate(cfg);
  v.detail << "synthetic a3a-shaped data; " << test::describe(cert) << " ";
  v.require(cert.reached, "merit target not reached within 100000 rounds");
  v.require(cert.bounded, "k*M exceeds 3x its value at k=100");
}

void equivalence_oracle(Verdict& v) {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 2 + rng() % 4;
    const std::size_t d = 1 + rng() % 3;
    const Graph g = test::random_connected_graph(rng, m);
    const GossipMatrix gm = mixing_for(g);
    const LossFamily fam = t % 2 ? heterogeneous_quadratics(m, d, rng())
                                 : test::small_logistic_family(m, 6, d, rng());
    const Matrix x0 = test::random_matrix(rng, static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
    AdaptiveOptions a;
    a.force_uniform = true;
    BaselineOptions b;
    AdaptiveState sa = make_adaptive_state(x0, a);
    BaselineState sb = make_baseline_state(x0, b);
    NeighborExchange ea(g), eb(g);
    for (int k = 0; k < 50; ++k) {
      adaptive_step(sa, gm, fam, a, ea);
      baseline_adaptive_step(sb, gm, fam, b, eb);
      worst = std::max({worst, (sa.x - sb.x).cwiseAbs().maxCoeff(), (sa.y - sb.y).cwiseAbs().maxCoeff()});
    }
  }
  v.detail << "10 instances x 50 steps, max entry gap " << worst << " ";
  v.require(worst <= 1e-12, "entrywise gap above 1e-12");
}

void fixed_point_stationarity(Verdict& v) {
  std::mt19937_64 rng(103);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t m = 2 + rng() % 5;
    const Graph g = test::random_connected_graph(rng, m);
    const LossFamily fam = t % 2 ? generate_quadratic(m, 6, 3, 0.2, rng())
                                 : test::small_logistic_family(m, 8, 3, rng());
    const FixedPoint fp = fixed_point(fam, 1e-11);
    AdaptiveOptions opts;
    opts.gamma = GammaSchedule::constant(1.0);
    opts.theta_init = 0.01;
    AdaptiveState s = make_adaptive_state(fp.X, opts);
    s.y = fp.Y;
    NeighborExchange ex(g);
    adaptive_step(s, mixing_for(g), fam, opts, ex);
    worst = std::max(worst, (s.x - fp.X).norm() / std::max(1.0, fp.X.norm()));
  }
  v.detail << "max relative move " << worst << " ";
  v.require(worst <= 1e-10, "iterate moved more than 1e-10");
}

void backtracking_suite(Verdict& v) {
  {
    const auto f = test::scaled_norm(1.0, 1);
    const auto r = backtrack(4.0, *f, Vector::Ones(1), -Vector::Ones(1), 1.0, 1.0);
    v.require(r.stepsize == 1.0 && r.trials == 3, "theta=4 example");
    const auto r1 = backtrack(1.0, *f, Vector::Ones(1), -Vector::Ones(1), 1.0, 1.0);
    v.require(r1.stepsize == 1.0 && r1.trials == 1, "theta=1 example");
  }
  std::mt19937_64 rng(107);
  const LossFamily quad = generate_quadratic(1, 5, 3, 0.0, 8);
  const LossFamily logi = test::small_logistic_family(1, 9, 3, 8);
  std::uniform_real_distribution<double> g(1.0, 2.0);
  double theta = 1.0;
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const Loss& f = t % 3 ? logi[0] : quad[0];
    const Vector x = test::random_vector(rng, 3);
    const Vector dir = -f.gradient(x) + test::random_vector(rng, 3);
    const double gamma = t % 7 == 0 ? 1.0 : g(rng);
    const auto r = backtrack(theta, f, x, dir, gamma, 1.0);
    violations += !(r.stepsize == gamma * theta || r.stepsize < theta);
    theta = r.stepsize;
  }
  v.detail << "dichotomy violations " << violations << "/10000; ";
  v.require(violations == 0, "growth-or-decrease dichotomy");
  int floor_violations = 0;
  for (double L : {1.0, 10.0, 100.0}) {
    const auto f = test::scaled_norm(L, 5);
    for (int t = 0; t < 1000; ++t) {
      const Vector x = test::random_vector(rng, 5);
      const Vector dir = test::random_vector(rng, 5);
      const double th = std::exp(std::uniform_real_distribution<double>(-9, 4)(rng));
      const double gamma = 1.0 + std::uniform_real_distribution<double>(0, 1)(rng);
      const double delta = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
      const auto r = backtrack(th, *f, x, dir, gamma, delta);
      floor_violations += r.stepsize < std::min(gamma * th, delta / (2 * L));
    }
  }
  v.detail << "floor violations " << floor_violations << "/3000 ";
  v.require(floor_violations == 0, "termination floor");
}

std::size_t rounds_to_global_min(std::vector<double> x, const Graph& g) {
  const double target = *std::min_element(x.begin(), x.end());
  std::size_t rounds = 0;
  while (std::any_of(x.begin(), x.end(), [&](double e) { return e != target; })) {
    x = local_min_consensus(x, g);
    ++rounds;
  }
  return rounds;
}

void consensus_suite(Verdict& v) {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> u;
  std::size_t graphs = 0;
  int bad = 0;
  for (std::size_t m = 1; m <= 6; ++m) {
    for (const Graph& g : test::all_connected_graphs(m)) {
      ++graphs;
      const std::size_t dg = diameter(g);
      for (std::size_t source = 0; source < m; ++source) {
        std::vector<double> x(m, 1.0);
        x[source] = 0.0;
        bad += rounds_to_global_min(x, g) > dg;
      }
    }
  }
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + rng() % 20;
    const Graph g = test::random_connected_graph(rng, m);
    std::vector<double> x(m);
    for (auto& e : x) e = u(rng);
    bad += rounds_to_global_min(x, g) > diameter(g);
  }
  v.detail << graphs << " exhaustive graphs + 100 random, " << bad << " over the diameter ";
  v.require(bad == 0, "consensus slower than the diameter");
}

void diameter_estimator(Verdict& v) {
  std::uint64_t seed = 113;
  for (std::size_t m : {5, 10, 20}) {
    const Graph g = build_line_graph(m);
    const GossipMatrix gm = mixing_for(g);
    const auto allowed = static_cast<int>(std::ceil(std::log2(2.0 * static_cast<double>(m - 1))));
    for (int variant = 0; variant < 2; ++variant) {
      const LossFamily fam = variant ? generate_quadratic(m, 12, 8, 0.0, ++seed)
                                     : test::small_logistic_family(m, 10, 8, ++seed);
      AdaptiveOptions opts;
      opts.d_init = 1;
      AdaptiveState s = make_adaptive_state(Matrix::Zero(static_cast<Eigen::Index>(m), 8), opts);
      NeighborExchange ex(g);
      bool monotone = true;
      std::size_t max_d = 1;
      int increases = 0;
      std::vector<int> doublings(m, 0);
      for (int k = 0; k < 2000; ++k) {
        const auto before = s.horizon;
        adaptive_step(s, gm, fam, opts, ex);
        for (std::size_t i = 0; i < m; ++i) {
          monotone = monotone && s.horizon[i] >= before[i];
          doublings[i] += s.doubled[i];
        }
        const std::size_t now = *std::max_element(s.horizon.begin(), s.horizon.end());
        increases += now > max_d;
        max_d = std::max(max_d, now);
      }
      const int per_agent = *std::max_element(doublings.begin(), doublings.end());
      if (variant == 0)
        v.detail << "m=" << m << " max d " << max_d << "/" << 2 * (m - 1) << " doublings "
                 << increases << "/" << allowed << "; ";
      v.require(monotone, "estimate decreased");
      v.require(max_d <= 2 * (m - 1), "estimate above 2(m-1)");
      v.require(increases <= allowed && per_agent <= allowed, "too many doubling events");
    }
  }
}

void gradient_checks(Verdict& v) {
  std::mt19937_64 rng(127);
  const LossFamily quad = generate_quadratic(4, 9, 6, 0.7, 8);
  const LossFamily logi = test::small_logistic_family(4, 10, 6, 8);
  double worst = 0.0;
  for (const LossFamily* fam : {&quad, &logi}) {
    for (int t = 0; t < 100; ++t) {
      const Loss& f = (*fam)[t % fam->size()];
      const Vector x = test::random_vector(rng, 6);
      const Vector g = f.gradient(x);
      Vector fd(6);
      const double h = 1e-6;
      for (Eigen::Index j = 0; j < 6; ++j) {
        Vector e = Vector::Zero(6);
        e(j) = h;
        fd(j) = (f.value(x + e) - f.value(x - e)) / (2 * h);
      }
      worst = std::max(worst, (g - fd).norm() / std::max(1.0, g.norm()));
    }
  }
  v.detail << "200 probes, max relative error " << worst << " ";
  v.require(worst <= 1e-5, "gradient mismatch");
}

void gossip_merit_algebra(Verdict& v) {
  std::mt19937_64 rng(131);
  double invariant = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 2 + rng() % 19;
    const double c = t % 2 ? 0.5 : 0.25;
    const Graph g = test::random_connected_graph(rng, m);
    const GossipMatrix gm = gossip_matrix(metropolis_weights(g), c);
    invariant = std::max(invariant, gossip_invariant_violation(gm, g));
    const SpectralData s = spectral_data(gm);
    const auto mi = static_cast<Eigen::Index>(m);
    // Orthonormal basis of the complement of the all-ones vector.
    Eigen::HouseholderQR<Matrix> qr(Matrix::Ones(mi, 1));
    const Matrix q = Matrix(qr.householderQ()).rightCols(mi - 1);
    const Matrix restricted = q.transpose() * s.merit * q;
    smallest = std::min(smallest, Eigen::SelfAdjointEigenSolver<Matrix>(restricted).eigenvalues().minCoeff());
  }
  v.detail << "invariant gap " << invariant << ", min eig of M on 1-perp " << smallest << "; ";
  v.require(invariant <= 1e-12, "gossip invariants");
  v.require(smallest > 0.0, "M not positive definite on 1-perp");

  const GossipMatrix gm2 = mixing_for(build_complete_graph(2));
  const SpectralData s2 = spectral_data(gm2);
  const LossFamily pair({std::make_shared<QuadraticLoss>(Matrix::Ones(1, 1), Vector::Ones(1)),
                         std::make_shared<QuadraticLoss>(Matrix::Ones(1, 1), -Vector::Ones(1))});
  const FixedPoint fp = fixed_point(pair, 1e-12);
  Matrix dy(2, 1);
  dy << 1.0, -1.0;
  const double sc = merit_sc(fp.X, fp.Y + dy, 2.0, fp, s2.merit);
  const LossFamily zero({std::make_shared<QuadraticLoss>(Matrix::Zero(1, 1), Vector::Zero(1)),
                         std::make_shared<QuadraticLoss>(Matrix::Zero(1, 1), Vector::Zero(1))});
  const FixedPoint zfp = fixed_point(zero, 1e-12);
  Matrix x(2, 1);
  x << 1.0, -1.0;
  const double cvx = merit_cvx(x, zfp, zero, gm2, 1.0);
  v.detail << "merit_sc " << sc << " merit_cvx " << cvx << " ";
  v.require(std::abs(sc - 8.0) <= 1e-12, "merit_sc hand value");
  v.require(std::abs(cvx - 1.0) <= 1e-12, "merit_cvx hand value");
}

void safeguard_variant(Verdict& v) {
  const Graph g = build_line_graph(6);
  const GossipMatrix gm = mixing_for(g);
  const LossFamily fam = test::small_logistic_family(6, 10, 4, 9);
  const Matrix x0 = Matrix::Zero(6, 4);

  AdaptiveOptions plain;
  AdaptiveState p = make_adaptive_state(x0, plain);
  NeighborExchange ep(g);
  double excursion = 0.0;
  std::vector<Matrix> reference;
  for (int k = 0; k < 200; ++k) {
    adaptive_step(p, gm, fam, plain, ep);
    reference.push_back(p.x);
    for (Eigen::Index i = 0; i < 6; ++i) excursion = std::max(excursion, p.x.row(i).norm());
  }

  AdaptiveOptions huge;
  huge.safeguard = {true, 1e9};
  AdaptiveState h = make_adaptive_state(x0, huge);
  NeighborExchange eh(g);
  double gap = 0.0;
  for (int k = 0; k < 200; ++k) {
    adaptive_step(h, gm, fam, huge, eh);
    gap = std::max(gap, (h.x - reference[static_cast<std::size_t>(k)]).cwiseAbs().maxCoeff());
  }
  v.detail << "radius 1e9 gap " << gap << "; ";
  v.require(gap <= 1e-12, "huge radius changed the trajectory");

  AdaptiveOptions tight;
  tight.safeguard = {true, 0.5 * excursion};
  AdaptiveState s = make_adaptive_state(x0, tight);
  NeighborExchange es(g);
  std::vector<bool> zero(6, false);
  std::vector<double> last(6, 0.0);
  bool monotone = true;
  for (int k = 0; k < 200; ++k) {
    adaptive_step(s, gm, fam, tight, es);
    for (std::size_t i = 0; i < 6; ++i) {
      if (zero[i]) monotone = monotone && s.theta[i] <= last[i];
      zero[i] = zero[i] || s.safeguard_bit[i] == 0;
      last[i] = s.theta[i];
    }
  }
  const auto zeroed = std::count(zero.begin(), zero.end(), true);
  v.detail << "radius " << 0.5 * excursion << ": " << zeroed << "/6 bits at 0 ";
  v.require(zeroed > 0, "no safeguard bit reached 0");
  v.require(monotone, "theta grew after the bit reached 0");
}

void determinism(Verdict& v) {
  const fs::path root = fs::temp_directory_path() / "dapd_acceptance_determinism";
  for (SuiteKind kind : {SuiteKind::quadratic_graphs, SuiteKind::condition_sweep,
                         SuiteKind::diameter_sweep, SuiteKind::logistic_graphs}) {
    SuiteOptions opt;
    opt.quick = true;
    opt.surrogate = kind == SuiteKind::logistic_graphs;
    opt.out = root / (to_string(kind) + "_a");
    fs::remove_all(opt.out);
    const SuiteResult a = run_suite(kind, opt);
    opt.out = root / (to_string(kind) + "_b");
    opt.jobs = 2;
    fs::remove_all(opt.out);
    const SuiteResult b = run_suite(kind, opt);
    std::size_t same = a.summary.filename() == b.summary.filename() && slurp(a.summary) == slurp(b.summary);
    for (std::size_t i = 0; i < a.traces.size() && i < b.traces.size(); ++i)
      same += slurp(a.traces[i]) == slurp(b.traces[i]);
    v.detail << to_string(kind) << " " << same << "/" << a.traces.size() + 1 << " identical; ";
    v.require(a.traces.size() == b.traces.size() && same == a.traces.size() + 1,
              to_string(kind) + " differs between runs");
  }
  fs::remove_all(root);
}

// Not gated: how close the smallest stepsize of a long run gets to the
// worst-case floor delta / (2 L_max).
void stepsize_floor_probe() {
  const RunConfig cfg = quadratic_config(GraphKind::line, 0.0);
  const Experiment ex = build_experiment(cfg);
  double l_max = 0.0;
  for (std::size_t i = 0; i < ex.family.size(); ++i) {
    const auto& q = dynamic_cast<const QuadraticLoss&>(ex.family[i]);
    l_max = std::max(l_max, 2.0 * q.a().operatorNorm() * q.a().operatorNorm() + q.lambda());
  }
  double theta_min = std::numeric_limits<double>::infinity();
  for (const RunTrace& t : strongly_convex_runs)
    for (const MeritRow& r : t.rows) theta_min = std::min(theta_min, r.theta_min);
  std::printf("INFO stepsize floor: min theta over criterion-1 runs %.3e, delta/(2 L_max) %.3e\n",
              theta_min, cfg.algorithm.delta / (2.0 * l_max));
}

}  // namespace

int main() {
  criterion(1, "strongly convex convergence", strongly_convex_convergence);
  criterion(2, "linear-rate certificate", linear_rate);
  criterion(3, "convex sublinear certificate", convex_sublinear);
  criterion(4, "equivalence oracle", equivalence_oracle);
  criterion(5, "fixed-point stationarity", fixed_point_stationarity);
  criterion(6, "backtracking properties", backtracking_suite);
  criterion(7, "min-consensus within the diameter", consensus_suite);
  criterion(8, "diameter estimator", diameter_estimator);
  criterion(9, "gradient checks", gradient_checks);
  criterion(10, "gossip and merit algebra", gossip_merit_algebra);
  criterion(11, "safeguard variant", safeguard_variant);
  criterion(12, "determinism", determinism);
  stepsize_floor_probe();
  return failures == 0 ? 0 : 1;
}
