#include "sobnet/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sobnet/constructions.hpp"
#include "sobnet/csv.hpp"
#include "sobnet/error.hpp"
#include "sobnet/kernels.hpp"
#include "sobnet/network_io.hpp"
#include "sobnet/rates.hpp"
#include "sobnet/sobolev.hpp"
#include "sobnet/svg.hpp"
#include "sobnet/training.hpp"

namespace sobnet::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Inf") return kInf;
  std::size_t pos = 0;
  double p = 0.0;
  try {
    p = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad value for --p: " + s);
  }
  if (pos != s.size() || !(p >= 1.0)) throw UsageError("--p must be a number >= 1 or inf");
  return p;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_floating_point_v<T>) {
      s += csv_number(v[i]);
    } else {
      s += std::to_string(v[i]);
    }
  }
  return s;
}

// Canonical command line plus key=value lines for every resolved parameter.
class Echo {
 public:
  explicit Echo(std::string sub) : sub_(std::move(sub)) {}

  Echo& add(const std::string& flag, const std::string& value) {
    items_.emplace_back(flag, value);
    return *this;
  }
  Echo& add(const std::string& flag, double value) { return add(flag, csv_number(value)); }
  Echo& flag(const std::string& flag, bool on) {
    if (on) switches_.push_back(flag);
    return *this;
  }

  std::vector<std::string> comments() const {
    std::vector<std::string> c;
    c.push_back("sobnet " + std::string(kVersion));
    std::string cmd = "command: sobnet " + sub_;
    for (const auto& [k, v] : items_) cmd += " --" + k + " " + v;
    for (const auto& s : switches_) cmd += " --" + s;
    c.push_back(cmd);
    for (const auto& [k, v] : items_) c.push_back(k + "=" + v);
    for (const auto& s : switches_) c.push_back(s + "=true");
    return c;
  }

 private:
  std::string sub_;
  std::vector<std::pair<std::string, std::string>> items_;
  std::vector<std::string> switches_;
};

void emit(const CsvTable& t, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    write_csv(out, t);
  } else {
    write_csv_file(path, t);
  }
}

Activation make_activation(const std::string& name, double a) {
  try {
    return activation_from_name(name, a);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

struct Common {
  int threads = 0;
};

struct RatesArgs {
  std::string activation;
  double a = 1.0;
  std::string p = "2";
  double B = 5.0;
  std::vector<double> ns{1, 2, 5, 10, 50, 100, 500, 1000};
  std::size_t panels = 2000;
  std::size_t nodes = 5;
  std::string out;
};

int cmd_rates(const RatesArgs& r, std::ostream& out, std::ostream& err) {
  const Activation act = make_activation(r.activation, r.a);
  const double p = parse_p(r.p);
  std::vector<RateRecord> recs;
  try {
    recs = verify_rate(act, p, Interval{-r.B, r.B}, r.ns, Resolution{r.panels, r.nodes});
  } catch (const UnsupportedError& e) {
    throw UsageError(e.what());
  }
  Echo echo("rates");
  echo.add("activation", r.activation).add("a", r.a).add("p", csv_number(p)).add("B", r.B)
      .add("ns", join(r.ns)).add("panels", std::to_string(r.panels))
      .add("nodes", std::to_string(r.nodes));
  CsvTable t;
  t.comments = echo.comments();
  t.columns = {"activation", "p", "n", "total_norm", "measured_error", "bound", "pass"};
  bool all = true;
  for (const auto& rec : recs) {
    t.rows.push_back({std::string(act.name()), csv_number(p), csv_number(rec.n),
                      csv_number(rec.total_norm), csv_number(rec.measured_error),
                      csv_number(rec.bound), csv_bool(rec.pass)});
    all = all && rec.pass;
  }
  emit(t, r.out, out);
  if (!all) {
    err << "rate bound violated for at least one n\n";
    return kBoundFailure;
  }
  return kOk;
}

struct ConvergeArgs {
  std::string activation;
  double a = 1.0;
  int k = 0;
  std::string p = "2";
  double B = 5.0;
  std::size_t L = 2;
  std::size_t d = 1;
  double D = 1.0;
  std::vector<double> ns{1, 2, 4, 8, 16, 32, 64, 128, 256};
  bool analytic = false;
  std::size_t panels = 2000;
  std::size_t nodes = 5;
  std::string out;
};

int cmd_converge(const ConvergeArgs& c, std::ostream& out, std::ostream&) {
  const Activation act = make_activation(c.activation, c.a);
  const double p = parse_p(c.p);
  const Smoothness s = act.smoothness();
  if (c.k < 0) throw UsageError("--k must be >= 0");
  if (c.d < 1 || c.d > 3) throw UsageError("--d must be 1, 2 or 3");
  if (c.L < 2) throw UsageError("--L must be >= 2");
  if (c.analytic) {
    if (!s.analytic || !s.bounded) {
      throw UsageError("--analytic needs a bounded analytic activation");
    }
  } else {
    if (s.m < 1) throw UsageError(std::string(act.name()) + " is not C^1; no convergence sequence");
    const int kmax = s.m >= Smoothness::kAnalytic ? Jet::kMaxOrder - 1
                                                  : s.m - 1 + (s.weak_next_derivative ? 1 : 0);
    if (c.k > kmax) {
      throw UsageError("--k " + std::to_string(c.k) + " exceeds the largest order " +
                       std::to_string(kmax) + " available for " + std::string(act.name()));
    }
  }
  const Resolution res{c.panels, c.nodes};
  Echo echo("converge");
  echo.add("activation", c.activation).add("a", c.a).add("k", std::to_string(c.k))
      .add("p", csv_number(p)).add("B", c.B).add("L", std::to_string(c.L))
      .add("d", std::to_string(c.d)).add("D", c.D).add("ns", join(c.ns))
      .add("panels", std::to_string(c.panels)).add("nodes", std::to_string(c.nodes))
      .flag("analytic", c.analytic);
  CsvTable t;
  t.comments = echo.comments();
  t.columns = {"n", "total_norm", "sobolev_error"};
  for (double n : c.ns) {
    if (!(n > 0.0)) throw UsageError("--ns entries must be positive");
    double err_value = 0.0;
    double norm = 0.0;
    if (c.analytic) {
      const Thm2Sequence seq = thm2_sequence(act, c.d, c.L, c.B, c.k, p, n, res);
      err_value = sobolev_error(network_jets(seq.net, act), seq.target.jets, c.k, p,
                                make_grid(Box{c.B, c.d}, res));
      norm = total_norm(seq.net);
    } else {
      const Thm1Sequence seq = thm1_sequence(act, c.d, c.L, c.B, n, c.D);
      const std::vector<Interval> axes(c.d, Interval{-c.B, c.B});
      err_value = sobolev_error(network_jets(seq.net, act), seq.target.jets, c.k, p,
                                make_grid(axes, res, seq.breakpoints));
      norm = total_norm(seq.net);
    }
    t.rows.push_back({csv_number(n), csv_number(norm), csv_number(err_value)});
  }
  emit(t, c.out, out);
  return kOk;
}

struct ProjectArgs {
  std::string activation;
  double a = 1.0;
  std::size_t d = 1;
  std::size_t L = 2;
  std::size_t i = 1;
  double B = 5.0;
  int k = 1;
  std::string p = "2";
  double eps = 0.1;
  std::size_t panels = 200;
  std::size_t nodes = 5;
  std::string out;
  std::string save_net;
};

int cmd_project(const ProjectArgs& c, std::ostream& out, std::ostream& err) {
  const Activation act = make_activation(c.activation, c.a);
  const double p = parse_p(c.p);
  if (c.i < 1 || c.i > c.d) throw UsageError("--i must lie in 1..d");
  if (c.d > 3) throw UsageError("--d must be at most 3");
  const auto s = act.smoothness();
  if (!s.analytic || !s.bounded) throw UsageError("projection needs a bounded analytic activation");
  Echo echo("project");
  echo.add("activation", c.activation).add("a", c.a).add("d", std::to_string(c.d))
      .add("L", std::to_string(c.L)).add("i", std::to_string(c.i)).add("B", c.B)
      .add("k", std::to_string(c.k)).add("p", csv_number(p)).add("eps", c.eps)
      .add("panels", std::to_string(c.panels)).add("nodes", std::to_string(c.nodes));
  CsvTable t;
  t.comments = echo.comments();
  t.columns = {"C", "sobolev_error"};
  try {
    const ProjectionResult r =
        projection_net(act, c.d, c.L, c.i - 1, c.B, c.k, p, c.eps, Resolution{c.panels, c.nodes});
    for (const auto& [C, e] : r.trace) t.rows.push_back({csv_number(C), csv_number(e)});
    if (r.trace.empty()) t.rows.push_back({csv_number(r.C), csv_number(r.error)});
    emit(t, c.out, out);
    if (!c.save_net.empty()) save_network(c.save_net, r.net);
  } catch (const ConstructionError& e) {
    err << e.what() << '\n';
    return kBoundFailure;
  }
  return kOk;
}

// Optional overrides on top of a preset.
struct TrainArgs {
  std::string preset;
  std::optional<std::string> activation;
  std::optional<double> a;
  std::optional<std::vector<std::size_t>> arch;
  std::optional<int> k;
  std::optional<double> B;
  std::optional<std::string> target;
  std::optional<int> knots;
  std::optional<double> target_lo;
  std::optional<double> target_hi;
  std::optional<int> epochs;
  std::optional<int> batch;
  std::optional<double> lr;
  std::optional<double> beta1;
  std::optional<double> beta2;
  std::optional<double> adam_eps;
  std::optional<double> init_scale;
  std::optional<double> clamp;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::uint64_t>> trial_seeds;
  std::optional<int> checkpoint_every;
  std::string load_net;
  std::string save_net;
  std::string outdir = ".";
  std::string out;
};

void add_train_options(CLI::App* sub, TrainArgs& t) {
  sub->add_option("--preset", t.preset, "elu-pwl | isrlu-pwq | sigmoid-proj | rate-softsign")
      ->required();
  sub->add_option("--activation", t.activation);
  sub->add_option("--a", t.a, "ISRU/ISRLU shape parameter");
  sub->add_option("--arch", t.arch, "d,N1,...,NL")->delimiter(',');
  sub->add_option("--k", t.k, "Sobolev order of the loss");
  sub->add_option("--B", t.B);
  sub->add_option("--target", t.target, "pwl | pwq | proj | rho-prime");
  sub->add_option("--knots", t.knots);
  sub->add_option("--target-lo", t.target_lo);
  sub->add_option("--target-hi", t.target_hi);
  sub->add_option("--epochs", t.epochs);
  sub->add_option("--batch", t.batch);
  sub->add_option("--lr", t.lr);
  sub->add_option("--beta1", t.beta1);
  sub->add_option("--beta2", t.beta2);
  sub->add_option("--adam-eps", t.adam_eps);
  sub->add_option("--init-scale", t.init_scale);
  sub->add_option("--clamp", t.clamp, "clamp every weight to [-C, C] after each step");
  sub->add_option("--trials", t.trials);
  sub->add_option("--seed", t.seed);
  sub->add_option("--trial-seeds", t.trial_seeds, "explicit per-trial seeds")->delimiter(',');
  sub->add_option("--checkpoint-every", t.checkpoint_every);
  sub->add_option("--load-net", t.load_net, "initial network for every trial");
}

TrainConfig resolve(const TrainArgs& t) {
  TrainConfig c;
  try {
    c = preset_config(t.preset);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (t.activation) c.activation = *t.activation;
  if (t.a) c.shape = *t.a;
  if (t.arch) c.arch = *t.arch;
  if (t.k) c.k = *t.k;
  if (t.B) c.B = *t.B;
  if (t.target) {
    try {
      c.target = target_spec_from_name(*t.target);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (t.knots) c.num_knots = *t.knots;
  if (t.target_lo) c.target_lo = *t.target_lo;
  if (t.target_hi) c.target_hi = *t.target_hi;
  if (t.epochs) c.epochs = *t.epochs;
  if (t.batch) c.batch = *t.batch;
  if (t.lr) c.adam.lr = *t.lr;
  if (t.beta1) c.adam.beta1 = *t.beta1;
  if (t.beta2) c.adam.beta2 = *t.beta2;
  if (t.adam_eps) c.adam.eps = *t.adam_eps;
  if (t.init_scale) c.init_scale = *t.init_scale;
  if (t.clamp) c.clamp = *t.clamp;
  if (t.trials) c.trials = *t.trials;
  if (t.seed) c.seed = *t.seed;
  if (t.trial_seeds) {
    c.trial_seeds = *t.trial_seeds;
    c.trials = static_cast<int>(c.trial_seeds.size());
  }
  if (t.checkpoint_every) c.checkpoint_every = *t.checkpoint_every;

  make_activation(c.activation, c.shape);
  if (c.arch.size() < 2) throw UsageError("--arch needs d and at least one width");
  for (auto w : c.arch) {
    if (w < 1) throw UsageError("--arch entries must be positive");
  }
  if (c.arch.back() != 1) throw UsageError("training needs a scalar output (last width 1)");
  if (c.target != TargetSpec::projection && c.arch[0] != 1) {
    throw UsageError("univariate targets need input dimension 1");
  }
  if (c.arch[0] > 3) throw UsageError("input dimension must be at most 3");
  if (c.k < 0 || c.k + 1 > Jet::kMaxOrder) throw UsageError("--k out of range");
  if (c.epochs < 1 || c.batch < 1 || c.trials < 1) {
    throw UsageError("--epochs, --batch and --trials must be positive");
  }
  if (c.num_knots < 1) throw UsageError("--knots must be positive");
  if (c.clamp && !(*c.clamp > 0.0)) throw UsageError("--clamp must be positive");
  if (!(c.B > 0.0)) throw UsageError("--B must be positive");
  return c;
}

Echo train_echo(const std::string& sub, const TrainConfig& c, const std::string& load_net) {
  Echo e(sub);
  e.add("preset", c.preset).add("activation", c.activation).add("a", c.shape)
      .add("arch", join(c.arch)).add("k", std::to_string(c.k)).add("B", c.B)
      .add("target", std::string(target_spec_name(c.target)))
      .add("knots", std::to_string(c.num_knots)).add("target-lo", c.target_lo)
      .add("target-hi", c.target_hi).add("epochs", std::to_string(c.epochs))
      .add("batch", std::to_string(c.batch)).add("lr", c.adam.lr).add("beta1", c.adam.beta1)
      .add("beta2", c.adam.beta2).add("adam-eps", c.adam.eps).add("init-scale", c.init_scale);
  if (c.clamp) e.add("clamp", *c.clamp);
  if (c.trial_seeds.empty()) {
    e.add("trials", std::to_string(c.trials)).add("seed", std::to_string(c.seed));
  } else {
    e.add("trial-seeds", join(c.trial_seeds));
  }
  e.add("checkpoint-every", std::to_string(c.checkpoint_every));
  if (!load_net.empty()) e.add("load-net", load_net);
  return e;
}

std::optional<Network> initial_net(const TrainArgs& t) {
  if (t.load_net.empty()) return std::nullopt;
  return load_network(t.load_net);
}

int cmd_train(const TrainArgs& t, std::ostream&, std::ostream& err) {
  const TrainConfig c = resolve(t);
  const ExperimentResult r = run_experiment(c, Exec::parallel, initial_net(t));
  const auto comments = train_echo("train", c, t.load_net).comments();

  CsvTable trials;
  trials.comments = comments;
  trials.columns = {"trial", "epoch", "loss", "best_loss", "total_norm"};
  int diverged = 0;
  for (const auto& tr : r.trials) {
    if (tr.diverged) ++diverged;
    for (const auto& rec : tr.records) {
      trials.rows.push_back({std::to_string(rec.trial), std::to_string(rec.epoch),
                             csv_number(rec.loss), csv_number(rec.best_loss),
                             csv_number(rec.total_norm)});
    }
  }
  CsvTable agg;
  agg.comments = comments;
  agg.columns = {"epoch", "mean_best_loss", "mean_norm", "norm_lo95", "norm_hi95"};
  for (const auto& a : r.aggregate) {
    agg.rows.push_back({std::to_string(a.epoch), csv_number(a.mean_best_loss),
                        csv_number(a.mean_norm), csv_number(a.norm_lo95), csv_number(a.norm_hi95)});
  }
  std::filesystem::create_directories(t.outdir);
  const std::filesystem::path dir(t.outdir);
  write_csv_file((dir / "trials.csv").string(), trials);
  write_csv_file((dir / "aggregate.csv").string(), agg);
  if (!t.save_net.empty() && r.trials.front().final_net) {
    save_network(t.save_net, *r.trials.front().final_net);
  }
  if (diverged > 0) err << diverged << " trial(s) diverged and were left out of the aggregate\n";
  return kOk;
}

int cmd_scatter(const TrainArgs& t, std::ostream& out, std::ostream&) {
  const TrainConfig c = resolve(t);
  const ExperimentResult r = run_experiment(c, Exec::parallel, initial_net(t));
  CsvTable s;
  s.comments = train_echo("scatter", c, t.load_net).comments();
  s.columns = {"checkpoint", "loss", "total_norm"};
  for (const auto& row : r.scatter) {
    s.rows.push_back({std::to_string(row.checkpoint), csv_number(row.loss),
                      csv_number(row.total_norm)});
  }
  emit(s, t.out, out);
  return kOk;
}

struct PlotArgs {
  std::string in;
  std::string x = "epoch";
  std::vector<std::string> y;
  std::vector<std::string> band;
  bool logy = false;
  bool logx = false;
  bool scatter = false;
  std::string title;
  std::string out;
};

int cmd_plot(const PlotArgs& p, std::ostream& out, std::ostream&) {
  CsvTable t;
  try {
    t = read_csv_file(p.in);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  auto need = [&](const std::string& col) {
    if (!t.has_column(col)) throw UsageError("CSV " + p.in + " has no column '" + col + "'");
  };
  need(p.x);
  if (p.y.empty()) throw UsageError("--y needs at least one column");
  for (const auto& y : p.y) need(y);
  if (!p.band.empty() && p.band.size() != 2) throw UsageError("--band takes two columns lo,hi");
  for (const auto& b : p.band) need(b);

  Chart chart;
  chart.title = p.title.empty() ? std::filesystem::path(p.in).filename().string() : p.title;
  chart.xlabel = p.x;
  chart.ylabel = p.y.size() == 1 ? p.y.front() : std::string("value");
  chart.logy = p.logy;
  chart.logx = p.logx;
  chart.scatter = p.scatter;
  const auto xs = t.numbers(p.x);
  for (const auto& y : p.y) chart.series.push_back({y, xs, t.numbers(y)});
  if (!p.band.empty()) chart.band = Band{xs, t.numbers(p.band[0]), t.numbers(p.band[1])};
  const std::string svg = render_svg(chart);
  if (p.out.empty() || p.out == "-") {
    out << svg;
  } else {
    std::ofstream f(p.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.out);
    f << svg;
  }
  return kOk;
}

int cmd_activations(double a, const std::string& path, std::ostream& out) {
  Echo echo("activations");
  echo.add("a", a);
  CsvTable t;
  t.comments = echo.comments();
  t.columns = {"name", "m", "analytic", "bounded", "sup_abs", "weak_next_derivative", "z0",
               "rho_prime_z0"};
  for (const Activation& act : activation_catalog(a)) {
    const Smoothness s = act.smoothness();
    const double z0 = find_z0(act);
    t.rows.push_back({std::string(act.name()),
                      s.analytic ? std::string("analytic") : std::to_string(s.m),
                      csv_bool(s.analytic), csv_bool(s.bounded),
                      s.sup_abs ? csv_number(*s.sup_abs) : std::string("inf"),
                      csv_bool(s.weak_next_derivative), csv_number(z0),
                      csv_number(act.derivative(z0))});
  }
  emit(t, path, out);
  return kOk;
}

}  // namespace

std::vector<std::string> split_command(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream ss{std::string(line)};
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

std::vector<std::string> echoed_command(const std::vector<std::string>& comments) {
  const std::string key = "command: ";
  for (const auto& c : comments) {
    if (c.rfind(key, 0) == 0) {
      auto args = split_command(std::string_view(c).substr(key.size()));
      if (!args.empty()) args.erase(args.begin());  // program name
      return args;
    }
  }
  return {};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sobolev-norm experiments on fixed-architecture neural networks", "sobnet"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "OpenMP threads (results do not depend on it)");

  double act_a = 1.0;
  std::string act_out;
  auto* s_act = app.add_subcommand("activations", "list the activation catalog");
  s_act->add_option("--a", act_a);
  s_act->add_option("--out", act_out);

  RatesArgs ra;
  auto* s_rates = app.add_subcommand("rates", "check ||h_n - rho'||_p against the proved 1/n bound");
  s_rates->add_option("--activation", ra.activation)->required();
  s_rates->add_option("--a", ra.a);
  s_rates->add_option("--p", ra.p, "1 <= p, or inf");
  s_rates->add_option("--B", ra.B, "domain [-B, B]");
  s_rates->add_option("--ns", ra.ns)->delimiter(',');
  s_rates->add_option("--panels", ra.panels);
  s_rates->add_option("--nodes", ra.nodes);
  s_rates->add_option("--out", ra.out);

  ConvergeArgs ca;
  auto* s_conv = app.add_subcommand("converge", "Sobolev error of the non-closedness sequences");
  s_conv->add_option("--activation", ca.activation)->required();
  s_conv->add_option("--a", ca.a);
  s_conv->add_option("--k", ca.k);
  s_conv->add_option("--p", ca.p);
  s_conv->add_option("--B", ca.B);
  s_conv->add_option("--L", ca.L);
  s_conv->add_option("--d", ca.d);
  s_conv->add_option("--D", ca.D, "covering range [-D, D]");
  s_conv->add_option("--ns", ca.ns)->delimiter(',');
  s_conv->add_flag("--analytic", ca.analytic, "use the bounded-analytic sequence towards F");
  s_conv->add_option("--panels", ca.panels);
  s_conv->add_option("--nodes", ca.nodes);
  s_conv->add_option("--out", ca.out);

  ProjectArgs pa;
  auto* s_proj = app.add_subcommand("project", "network approximating x -> x_i in W^{k,p}");
  s_proj->add_option("--activation", pa.activation)->required();
  s_proj->add_option("--a", pa.a);
  s_proj->add_option("--d", pa.d);
  s_proj->add_option("--L", pa.L);
  s_proj->add_option("--i", pa.i, "coordinate, 1-based");
  s_proj->add_option("--B", pa.B);
  s_proj->add_option("--k", pa.k);
  s_proj->add_option("--p", pa.p);
  s_proj->add_option("--eps", pa.eps);
  s_proj->add_option("--panels", pa.panels);
  s_proj->add_option("--nodes", pa.nodes);
  s_proj->add_option("--out", pa.out);
  s_proj->add_option("--save-net", pa.save_net);

  TrainArgs ta;
  auto* s_train = app.add_subcommand("train", "Sobolev training runs");
  add_train_options(s_train, ta);
  s_train->add_option("--outdir", ta.outdir, "directory for trials.csv and aggregate.csv");
  s_train->add_option("--save-net", ta.save_net, "final network of trial 0");

  TrainArgs sa;
  auto* s_scatter = app.add_subcommand("scatter", "loss vs total norm at training checkpoints");
  add_train_options(s_scatter, sa);
  s_scatter->add_option("--out", sa.out);

  PlotArgs pl;
  auto* s_plot = app.add_subcommand("plot", "render a CSV column as SVG");
  s_plot->add_option("--in", pl.in)->required();
  s_plot->add_option("--x", pl.x);
  s_plot->add_option("--y", pl.y)->delimiter(',')->required();
  s_plot->add_option("--band", pl.band, "lo,hi columns")->delimiter(',');
  s_plot->add_flag("--logy", pl.logy);
  s_plot->add_flag("--logx", pl.logx);
  s_plot->add_flag("--scatter", pl.scatter);
  s_plot->add_option("--title", pl.title);
  s_plot->add_option("--out", pl.out);

  std::vector<std::string> argv_store;
  argv_store.push_back("sobnet");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (common.threads > 0) set_threads(common.threads);

  try {
    if (*s_act) return cmd_activations(act_a, act_out, out);
    if (*s_rates) return cmd_rates(ra, out, err);
    if (*s_conv) return cmd_converge(ca, out, err);
    if (*s_proj) return cmd_project(pa, out, err);
    if (*s_train) return cmd_train(ta, out, err);
    if (*s_scatter) return cmd_scatter(sa, out, err);
    if (*s_plot) return cmd_plot(pl, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ShapeError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConstructionError& e) {
    err << "construction failed: " << e.what() << '\n';
    return kBoundFailure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsage;
}

}  // namespace sobnet::cli
