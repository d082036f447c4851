// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sobnet/cli.hpp"
#include "sobnet/constructions.hpp"
#include "sobnet/csv.hpp"
#include "sobnet/error.hpp"
#include "sobnet/rates.hpp"
#include "sobnet/sobolev.hpp"
#include "sobnet/training.hpp"

using namespace sobnet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first few failure reasons.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    pass_ = false;
    if (++failures_ <= 3) detail_ += (detail_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  Outcome done() const {
    Outcome o;
    o.pass = pass_;
    o.detail = pass_ ? notes_ : detail_;
    if (!pass_ && failures_ > 3) o.detail += " (+" + std::to_string(failures_ - 3) + " more)";
    return o;
  }

 private:
  bool pass_ = true;
  int failures_ = 0;
  std::string detail_;
  std::string notes_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const std::vector<double> kNs = {1, 2, 5, 10, 50, 100, 500, 1000};
const Resolution kDense{2000, 5};  // 10^4 nodes on [-5, 5]
const Interval kOmega{-5.0, 5.0};

std::vector<double> doublings(int last) {
  std::vector<double> v;
  for (int i = 0; i <= last; ++i) v.push_back(std::ldexp(1.0, i));
  return v;
}

void rate_check(Check& c, const Activation& act, double p, bool nonneg_zero) {
  const auto b = bound_constant(act, p, kOmega);
  for (const auto& r : verify_rate(act, p, kOmega, kNs, kDense)) {
    c.expect(r.measured_error <= b.bound(r.n) + 1e-6,
             std::string(act.name()) + " p=" + fmt(p) + " n=" + fmt(r.n) + " error " +
                 fmt(r.measured_error) + " > " + fmt(b.bound(r.n)));
    if (nonneg_zero) {
      c.expect(r.max_error_nonneg == 0.0,
               "elu n=" + fmt(r.n) + " nonzero on x>=0: " + fmt(r.max_error_nonneg));
    }
  }
}

Outcome c1() {
  Check c;
  const Activation s(ActivationKind::softsign);
  rate_check(c, s, kInf, false);
  c.note("K=" + fmt(bound_constant(s, kInf, kOmega).K));
  return c.done();
}

Outcome c2() {
  Check c;
  const Activation elu(ActivationKind::elu);
  rate_check(c, elu, kInf, true);
  rate_check(c, elu, 1.0, true);
  rate_check(c, elu, 2.0, true);
  c.expect(std::abs(bound_constant(elu, 2.0, kOmega).K - std::sqrt(11.0 / 24.0)) < 1e-15,
           "p=2 constant");
  return c.done();
}

Outcome c3() {
  Check c;
  const Activation sig(ActivationKind::sigmoid);
  const Activation th(ActivationKind::tanh);
  rate_check(c, sig, kInf, false);
  rate_check(c, th, kInf, false);
  // 2K must not undercut the closed-form sup of rho'' over the real line.
  const double sup2 = 1.0 / (6.0 * std::sqrt(3.0));
  const double K = bound_constant(sig, kInf, kOmega).K;
  c.expect(std::abs(2 * K - sup2) < 1e-12, "sigmoid sup|rho''| " + fmt(2 * K));
  c.note("sigmoid K=" + fmt(K));
  return c.done();
}

Outcome c4() {
  Check c;
  for (auto k : {ActivationKind::softsign, ActivationKind::elu}) {
    const Activation act(k);
    std::vector<double> x, y;
    for (const auto& r : verify_rate(act, 2.0, kOmega, doublings(9), kDense)) {
      x.push_back(r.total_norm);
      y.push_back(r.measured_error);
    }
    const double s = loglog_slope(x, y);
    c.expect(s >= -1.15 && s <= -0.85, std::string(act.name()) + " slope " + fmt(s));
    c.note(std::string(act.name()) + " slope " + fmt(s));
  }
  return c.done();
}

Outcome c5() {
  Check c;
  struct Case {
    ActivationKind kind;
    int k;
  };
  const Case cases[] = {{ActivationKind::softsign, 1},
                        {ActivationKind::elu, 1},
                        {ActivationKind::isrlu, 1},
                        {ActivationKind::isrlu, 2}};
  double worst = 0.0;
  for (const auto& cs : cases) {
    const Activation act(cs.kind);
    for (double p : {1.0, 2.0}) {
      std::vector<double> errs;
      for (double n : doublings(8)) {
        const auto seq = thm1_sequence(act, 1, 2, 5.0, n);
        const Interval ax[1] = {kOmega};
        const auto grid = make_grid(ax, kDense, seq.breakpoints);
        errs.push_back(sobolev_error(network_jets(seq.net, act), seq.target.jets, cs.k, p, grid));
      }
      const std::string tag =
          std::string(act.name()) + " k=" + std::to_string(cs.k) + " p=" + fmt(p);
      for (std::size_t i = 1; i < errs.size(); ++i) {
        c.expect(errs[i] <= errs[i - 1] * 1.05, tag + " rises at step " + std::to_string(i));
      }
      c.expect(errs.back() <= errs.front() / 10,
               tag + " final/initial " + fmt(errs.back() / errs.front()));
      worst = std::max(worst, errs.back() / errs.front());
    }
  }
  c.note("worst final/initial " + fmt(worst));
  return c.done();
}

Outcome c6() {
  Check c;
  int built = 0;
  for (auto kind : {ActivationKind::sigmoid, ActivationKind::tanh}) {
    const Activation act(kind);
    for (std::size_t d : {1u, 2u}) {
      const Resolution res = d == 1 ? Resolution{200, 5} : Resolution{60, 5};
      const Resolution fine{2 * res.panels, res.nodes};
      const auto fine_grid = make_grid(Box{5.0, d}, fine);
      for (std::size_t L : {2u, 3u}) {
        for (int k : {1, 2}) {
          for (double eps : {0.5, 0.1}) {
            const std::string tag = std::string(act.name()) + " d=" + std::to_string(d) +
                                    " L=" + std::to_string(L) + " k=" + std::to_string(k) +
                                    " eps=" + fmt(eps);
            try {
              const auto r = projection_net(act, d, L, 0, 5.0, k, 2.0, eps, res);
              const double e = sobolev_error(network_jets(r.net, act),
                                             projection_target(0).jets, k, 2.0, fine_grid);
              c.expect(e <= 2 * eps, tag + " refined error " + fmt(e));
              ++built;
            } catch (const ConstructionError& e) {
              c.expect(false, tag + ": " + e.what());
            }
          }
        }
      }
    }
  }
  c.note(std::to_string(built) + " networks");
  return c.done();
}

Outcome c7() {
  Check c;
  const Activation sig(ActivationKind::sigmoid);
  const auto grid = make_grid(Box{5.0, 1}, kDense);
  for (std::size_t L : {2u, 3u}) {
    std::vector<double> errs;
    for (double n : doublings(6)) {
      const auto seq = thm2_sequence(sig, 1, L, 5.0, 1, 2.0, n, kDense);
      errs.push_back(sobolev_error(network_jets(seq.net, sig), seq.target.jets, 1, 2.0, grid));
    }
    const std::string tag = "L=" + std::to_string(L);
    for (std::size_t i = 1; i < errs.size(); ++i) {
      c.expect(errs[i] < errs[i - 1], tag + " not decreasing at step " + std::to_string(i));
    }
    c.expect(errs.back() <= errs.front() / 5, tag + " final/initial " +
                                                  fmt(errs.back() / errs.front()));
    c.note(tag + " " + fmt(errs.front()) + " -> " + fmt(errs.back()));
  }
  return c.done();
}

Outcome c8() {
  Check c;
  CounterRng rng(8, 0);
  const auto catalog = activation_catalog();

  // concatenation is composition
  double worst_concat = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Activation& act = catalog[i % catalog.size()];
    const std::size_t d = 1 + i % 3;
    const std::size_t mid = 1 + (i / 3) % 3;
    const Network inner = random_init(Architecture(d, {3, 2, mid}), 1000 + i, 0.8);
    const Network outer = random_init(Architecture(mid, {4, 1}), 2000 + i, 0.8);
    std::vector<double> x(d);
    for (auto& v : x) v = rng.uniform(-2, 2);
    const auto y = realize(inner, act, x);
    const double want = realize_scalar(outer, act, y);
    const double got = realize_scalar(concat(outer, inner), act, x);
    worst_concat = std::max(worst_concat, std::abs(got - want) / std::max(1.0, std::abs(want)));
  }
  c.expect(worst_concat <= 1e-12, "concat mismatch " + fmt(worst_concat));

  // realize_jet against central differences of realize
  double worst_jet = 0.0;
  const double h = 1e-5;
  int jets = 0;
  for (int i = 0; jets < 100; ++i) {
    const Activation& act = catalog[i % catalog.size()];
    const Network net = random_init(Architecture(1, {4, 3, 1}), 3000 + i, 0.7);
    const std::vector<double> x = {rng.uniform(-2, 2)};
    if (near_kink(net, act, x, 1e-2)) continue;
    ++jets;
    const Jet j = realize_jet(net, act, x, 0, 3);
    // order 1 from realize itself, higher orders from the jet one order down
    auto lower = [&](double t, int o) {
      const std::vector<double> xt = {x[0] + t};
      return o == 1 ? realize_scalar(net, act, xt) : realize_jet(net, act, xt, 0, o - 1).derivative(o - 1);
    };
    for (int o = 1; o <= 3; ++o) {
      const double fd = (lower(h, o) - lower(-h, o)) / (2 * h);
      const double exact = j.derivative(o);
      worst_jet = std::max(worst_jet, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
  }
  c.expect(worst_jet <= 1e-6, "jet vs differences " + fmt(worst_jet));

  // gradient against central differences of the loss
  double worst_grad = 0.0;
  int cases = 0;
  for (int i = 0; cases < 50; ++i) {
    const Activation& act = catalog[i % catalog.size()];
    const auto s = act.smoothness();
    const int k = i % 3;
    const std::size_t d = 1 + (i / 9) % 2;
    if (s.m < k && !s.analytic) continue;
    const Network net = random_init(Architecture(d, {3, 1}), 4000 + i, 0.7);
    const JetField target = d == 1 ? gen_piecewise_quadratic(i, 4, 3.0, -1, 1).as_target().jets
                                   : projection_target(1).jets;
    PointSet batch{d, {}};
    while (batch.size() < 5) {
      const PointSet p = uniform_batch(rng, 1, d, 2.0);
      if (near_kink(net, act, p.point(0), 1e-2)) continue;
      batch.coords.insert(batch.coords.end(), p.coords.begin(), p.coords.end());
    }
    ++cases;
    const auto g = loss_gradient(net, act, target, k, batch);
    auto params = net.flatten();
    for (std::size_t q = 0; q < params.size(); ++q) {
      const double save = params[q];
      params[q] = save + 1e-6;
      const double up = sobolev_loss(net.with_parameters(params), act, target, k, batch);
      params[q] = save - 1e-6;
      const double dn = sobolev_loss(net.with_parameters(params), act, target, k, batch);
      params[q] = save;
      const double fd = (up - dn) / 2e-6;
      worst_grad = std::max(worst_grad, std::abs(fd - g[q]) / std::max(1.0, std::abs(g[q])));
    }
  }
  c.expect(worst_grad <= 1e-4, "gradient vs differences " + fmt(worst_grad));

  const auto grid = make_grid(Box{1.0, 1}, Resolution{10, 5});
  double s = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += grid.weight(i) * grid.point(i)[0] * grid.point(i)[0];
  c.expect(std::abs(s - 2.0 / 3.0) <= 1e-12, "x^2 quadrature " + fmt(s - 2.0 / 3.0));

  c.note("concat " + fmt(worst_concat) + ", jet " + fmt(worst_jet) + ", grad " + fmt(worst_grad));
  return c.done();
}

struct Summary {
  double first_loss = 0, final_best = 0, initial_norm = 0, final_norm = 0;
  int used = 0;
};

Summary summarize(const ExperimentResult& r) {
  std::vector<double> first, best, n0, n1;
  for (const auto& t : r.trials) {
    if (t.diverged) continue;
    first.push_back(t.records.front().loss);
    best.push_back(t.records.back().best_loss);
    n0.push_back(t.initial_norm);
    n1.push_back(t.records.back().total_norm);
  }
  return {median(first), median(best), median(n0), median(n1), static_cast<int>(first.size())};
}

Outcome c9() {
  Check c;
  for (const char* name : {"elu-pwl", "isrlu-pwq", "sigmoid-proj"}) {
    TrainConfig cfg = preset_config(name);
    const bool norm_check = std::string(name) != "sigmoid-proj";
    cfg.trials = norm_check ? 20 : 10;
    cfg.epochs = 2000;
    cfg.seed = 42;
    const Summary s = summarize(run_experiment(cfg));
    const double lr = s.final_best / s.first_loss;
    const double nr = s.final_norm / s.initial_norm;
    c.expect(lr <= 0.2, std::string(name) + " loss ratio " + fmt(lr));
    if (norm_check) c.expect(nr >= 1.5, std::string(name) + " norm ratio " + fmt(nr));
    c.note(std::string(name) + " loss x" + fmt(lr) + (norm_check ? " norm x" + fmt(nr) : ""));
  }
  return c.done();
}

Outcome c10() {
  Check c;
  TrainConfig cfg = preset_config("rate-softsign");
  cfg.trials = 10;
  cfg.seed = 42;
  TrainConfig clamped = cfg;
  clamped.clamp = 2.0;
  const auto free_run = run_experiment(cfg);
  const auto clamp_run = run_experiment(clamped);
  std::vector<double> free_loss, clamp_loss;
  for (const auto& t : free_run.trials) {
    if (!t.diverged) free_loss.push_back(t.records.back().best_loss);
  }
  double max_norm = 0.0;
  for (const auto& t : clamp_run.trials) {
    c.expect(!t.diverged, "clamped trial diverged");
    clamp_loss.push_back(t.records.back().best_loss);
    max_norm = std::max(max_norm, t.initial_norm);
    for (const auto& r : t.records) max_norm = std::max(max_norm, r.total_norm);
  }
  const double mf = median(free_loss), mc = median(clamp_loss);
  c.expect(mc >= mf, "clamped median " + fmt(mc) + " < unclamped " + fmt(mf));
  c.expect(max_norm <= 4.0, "clamped norm " + fmt(max_norm));
  c.note("clamped " + fmt(mc) + " vs free " + fmt(mf) + ", max clamped norm " + fmt(max_norm));
  return c.done();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Outcome c11() {
  Check c;
  const fs::path dir = fs::temp_directory_path() / "sobnet_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string() + "/";

  struct Job {
    std::string line;
    std::string file;       // CSV carrying the echo
    std::string out_flag;   // how to redirect the re-run
  };
  const std::vector<Job> jobs = {
      {"activations --out " + d + "act.csv", "act.csv", "--out"},
      {"rates --activation softsign --p inf --ns 1,10,100 --out " + d + "rates.csv", "rates.csv",
       "--out"},
      {"converge --activation elu --k 1 --p 2 --ns 1,4,16 --panels 200 --out " + d + "conv.csv",
       "conv.csv", "--out"},
      {"converge --activation sigmoid --analytic --k 1 --L 3 --ns 1,2 --panels 100 --out " + d +
           "conv2.csv",
       "conv2.csv", "--out"},
      {"project --activation tanh --d 2 --i 2 --L 3 --k 2 --eps 0.5 --panels 10 --out " + d +
           "proj.csv",
       "proj.csv", "--out"},
      {"train --preset isrlu-pwq --trials 3 --epochs 40 --batch 32 --seed 5 --outdir " + d +
           "train",
       "train/trials.csv", "--outdir"},
      {"scatter --preset elu-pwl --trials 3 --epochs 40 --batch 32 --checkpoint-every 10 --out " +
           d + "scatter.csv",
       "scatter.csv", "--out"},
  };
  int idx = 0;
  for (const auto& job : jobs) {
    auto args = cli::split_command("--threads 1 " + job.line);
    if (cli_run(args) != cli::kOk) {
      c.expect(false, "failed: " + job.line);
      continue;
    }
    const fs::path first = d + job.file;
    auto again = cli::echoed_command(read_csv_file(first.string()).comments);
    c.expect(!again.empty(), "no echo in " + job.file);
    if (again.empty()) continue;
    const std::string tag = "rerun" + std::to_string(idx++);
    again.insert(again.begin(), {"--threads", "4"});
    again.push_back(job.out_flag);
    fs::path second;
    if (job.out_flag == "--outdir") {
      again.push_back(d + tag);
      second = fs::path(d + tag) / first.filename();
      c.expect(cli_run(again) == cli::kOk &&
                   slurp(fs::path(d + tag) / "aggregate.csv") ==
                       slurp(first.parent_path() / "aggregate.csv"),
               "aggregate differs for " + job.file);
    } else {
      second = d + tag + ".csv";
      again.push_back(second.string());
      c.expect(cli_run(again) == cli::kOk, "re-run failed for " + job.file);
    }
    c.expect(slurp(first) == slurp(second), "bytes differ for " + job.file);
  }
  const std::string plot = "plot --in " + d + "rates.csv --x n --y measured_error,bound --logy";
  cli_run(cli::split_command(plot + " --out " + d + "a.svg"));
  cli_run(cli::split_command("--threads 3 " + plot + " --out " + d + "b.svg"));
  c.expect(!slurp(d + "a.svg").empty() && slurp(d + "a.svg") == slurp(d + "b.svg"),
           "plot output differs");
  fs::remove_all(dir);
  c.note(std::to_string(jobs.size()) + " CSV commands + plot");
  return c.done();
}

}  // namespace

// With an argument N only criterion N runs.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"softsign sup rate", c1},         {"ELU rates", c2},
      {"C^m rate", c3},                  {"inverse-proportional slope", c4},
      {"non-closedness convergence", c5}, {"projection networks", c6},
      {"analytic sequence", c7},         {"structural oracles", c8},
      {"training reproduction", c9},     {"bounded-weight closedness", c10},
      {"determinism", c11},
  };
  std::size_t only = 0;
  if (argc > 1) {
    only = std::strtoul(argv[1], nullptr, 10);
    if (only < 1 || only > criteria.size()) {
      std::fprintf(stderr, "usage: acceptance [1-%zu]\n", criteria.size());
      return 2;
    }
  }
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && i + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%s) [%.1fs] %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, sec, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
