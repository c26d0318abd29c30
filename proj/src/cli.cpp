#include "chanent/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "chanent/acceptance.hpp"
#include "chanent/bosonic.hpp"
#include "chanent/channel.hpp"
#include "chanent/channel_divergence.hpp"
#include "chanent/channel_entropy.hpp"
#include "chanent/channel_io.hpp"
#include "chanent/errors.hpp"
#include "chanent/optimizer.hpp"

namespace chanent::cli {

namespace {

using nlohmann::json;

struct Row {
  std::string subcommand;
  std::string channel_name;
  std::optional<double> alpha;
  double value = 0.0;
  std::optional<double> certificate;
  std::string exactness;
  int iterations = 0;
  std::string route;
  std::optional<double> cross_check;
};

struct Request {
  std::string subcommand;
  std::string channel_path, left_path, right_path;
  std::optional<double> alpha;
  std::string kind = "relative";
  std::string mode = "generalized";
  std::string output = "text";
  NumericPolicy policy;

  std::string family = "thermal";
  double eta = 0.5, gain = 2.0, xi = 0.0, nb = 0.0;
  std::optional<double> ns;
  bool unconstrained = false;

  std::string quantity = "entropy";
  std::string over = "alpha";
  double from = 0.0, to = 0.0;
  int steps = 2;
  int jobs = 0;
  /// Replaces standard.params.p in the channel spec(s) when set.
  std::optional<double> p_override;

  std::vector<int> only;
  bool timing = false;
};

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string optional_number(const std::optional<double>& x) { return x ? number(*x) : std::string(); }

json json_number(double x) {
  if (std::isfinite(x)) return x;
  return number(x);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path + ": cannot open channel file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

KrausChannel load(const std::string& path, const std::string& flag, const std::optional<double>& p) {
  if (path.empty()) throw ValidationError("missing " + flag);
  std::string text = read_file(path);
  if (p) {
    json spec;
    try {
      spec = json::parse(text);
    } catch (const json::exception&) {
      return io::parse_channel(text, path);  // reports the parse error with its line
    }
    if (!spec.is_object() || !spec.contains("standard")) {
      throw ValidationError(path + ": sweeping p requires a \"standard\" channel specification");
    }
    spec["standard"]["params"]["p"] = *p;
    text = spec.dump(2);
  }
  return io::parse_channel(text, path);
}

std::string label(const KrausChannel& ch, const std::string& path) {
  if (!ch.name().empty()) return ch.name();
  return path;
}

std::string exactness_of(const OptimizationReport& r) {
  return r.converged ? to_string(Exactness::certified) : to_string(Exactness::heuristic_bound);
}

std::optional<double> certificate_of(const OptimizationReport& r) {
  if (r.fw_gap) return r.fw_gap;
  return r.restart_spread;
}

Row report_row(const Request& q, const KrausChannel& ch, const OptimizationReport& r) {
  Row row;
  row.subcommand = q.subcommand;
  row.channel_name = label(ch, q.channel_path);
  row.value = r.value;
  row.certificate = certificate_of(r);
  row.exactness = exactness_of(r);
  row.iterations = r.iterations;
  row.route = r.route;
  row.cross_check = r.cross_check;
  return row;
}

double require_alpha(const Request& q) {
  if (!q.alpha) throw ValidationError("--alpha is required");
  return *q.alpha;
}

DivergenceMode mode_from_string(const std::string& s) {
  if (s == "generalized") return DivergenceMode::generalized;
  if (s == "choi") return DivergenceMode::choi;
  if (s == "adversarial-choi" || s == "adversarial_choi") return DivergenceMode::adversarial_choi;
  if (s == "adversarial") return DivergenceMode::adversarial;
  throw ValidationError("unknown divergence mode '" + s + "'");
}

std::vector<Row> compute(const Request& q) {
  const std::string& sub = q.subcommand;
  if (sub == "entropy") {
    const KrausChannel ch = load(q.channel_path, "--channel", q.p_override);
    return {report_row(q, ch, channel_entropy(ch, q.policy))};
  }
  if (sub == "renyi") {
    const KrausChannel ch = load(q.channel_path, "--channel", q.p_override);
    const double a = require_alpha(q);
    Row row = report_row(q, ch, renyi_channel_entropy(ch, a, q.policy));
    row.alpha = a;
    row.exactness = to_string(Exactness::heuristic_bound);
    return {row};
  }
  if (sub == "min-entropy") {
    const KrausChannel ch = load(q.channel_path, "--channel", q.p_override);
    Row row;
    row.subcommand = sub;
    row.channel_name = label(ch, q.channel_path);
    row.value = min_entropy_channel(ch);
    row.exactness = to_string(Exactness::closed_form);
    row.route = "choi_max_eigenvalue";
    return {row};
  }
  if (sub == "ext-min-entropy") {
    const KrausChannel ch = load(q.channel_path, "--channel", q.p_override);
    return {report_row(q, ch, extended_min_entropy(ch, q.policy))};
  }
  if (sub == "divergence") {
    const KrausChannel n = load(q.left_path, "--left", q.p_override);
    const KrausChannel m = load(q.right_path, "--right", q.p_override);
    const DivergenceKind kind = divergence_kind_from_string(q.kind);
    const bool renyi = kind == DivergenceKind::sandwiched_renyi || kind == DivergenceKind::petz_renyi;
    const double a = renyi ? require_alpha(q) : 0.0;
    ChannelDivergenceResult r;
    switch (mode_from_string(q.mode)) {
      case DivergenceMode::generalized: r = generalized_channel_divergence(n, m, kind, a, q.policy); break;
      case DivergenceMode::choi: r = choi_divergence(n, m, kind, a); break;
      case DivergenceMode::adversarial_choi: r = adversarial_choi_divergence(n, m, kind, a, q.policy); break;
      case DivergenceMode::adversarial: r = adversarial_divergence(n, m, kind, a, q.policy); break;
    }
    Row row;
    row.subcommand = sub;
    row.channel_name = label(n, q.left_path) + "||" + label(m, q.right_path);
    if (renyi) row.alpha = a;
    row.value = r.value;
    row.certificate = r.certificate;
    row.exactness = to_string(r.exactness);
    row.iterations = r.iterations;
    row.route = to_string(r.mode) + ":" + to_string(r.kind);
    row.cross_check = r.cross_check;
    return {row};
  }
  if (sub == "choi-suite") {
    const KrausChannel ch = load(q.channel_path, "--channel", q.p_override);
    const double a = require_alpha(q);
    const ChoiEntropySuite s = choi_entropy_suite(ch, a, q.policy);
    const std::pair<const char*, double> members[] = {{"H^Phi", s.von_neumann},
                                                      {"H_alpha^Phi", s.sandwiched},
                                                      {"Hbar_alpha^Phi", s.petz},
                                                      {"H_alpha^adv,Phi", s.sandwiched_adv},
                                                      {"Hbar_alpha^adv,Phi", s.petz_adv}};
    std::vector<Row> rows;
    for (const auto& [name, value] : members) {
      Row row;
      row.subcommand = sub;
      row.channel_name = label(ch, q.channel_path);
      row.alpha = a;
      row.value = value;
      row.exactness = std::string(name) == "H_alpha^adv,Phi" ? to_string(Exactness::certified)
                                                             : to_string(Exactness::closed_form);
      row.route = name;
      rows.push_back(row);
    }
    return rows;
  }
  if (sub == "bosonic") {
    bosonic::Params p;
    p.family = bosonic::family_from_string(q.family);
    p.eta = q.eta;
    p.gain = q.gain;
    p.xi = q.xi;
    p.nb = q.nb;
    p.ns = q.ns;
    p.validate();
    Row row;
    row.subcommand = sub;
    row.channel_name = bosonic::to_string(p.family);
    row.exactness = to_string(Exactness::closed_form);
    if (q.unconstrained) {
      row.value = bosonic::unconstrained_entropy(p);
      row.route = "unconstrained";
    } else {
      if (!p.ns) throw ValidationError("--ns is required unless --unconstrained is given");
      row.value = bosonic::constrained_entropy(p);
      row.route = "constrained";
    }
    return {row};
  }
  throw ValidationError("unknown subcommand '" + sub + "'");
}

std::vector<Row> sweep(const Request& q) {
  static const std::vector<std::string> quantities{"entropy",         "renyi",      "min-entropy",
                                                   "ext-min-entropy", "divergence", "bosonic"};
  if (std::find(quantities.begin(), quantities.end(), q.quantity) == quantities.end()) {
    throw ValidationError("--quantity '" + q.quantity + "' cannot be swept");
  }
  if (q.steps < 1) throw ValidationError("--steps must be at least 1");
  if (q.over == "ns" && q.quantity != "bosonic") throw ValidationError("--over ns applies to --quantity bosonic");
  if (q.over != "ns" && q.quantity == "bosonic") throw ValidationError("--quantity bosonic sweeps --over ns only");
  if (q.over == "alpha" && q.quantity != "renyi" && q.quantity != "divergence") {
    throw ValidationError("--over alpha applies to --quantity renyi or divergence");
  }
  if (q.over != "alpha" && q.over != "p" && q.over != "ns") throw ValidationError("--over must be alpha, p or ns");

  std::vector<Request> points;
  for (int i = 0; i < q.steps; ++i) {
    const double t = q.steps == 1 ? 0.0 : double(i) / (q.steps - 1);
    const double x = q.from + (q.to - q.from) * t;
    Request point = q;
    point.subcommand = q.quantity;
    if (q.over == "alpha") {
      point.alpha = x;
      if (x == 1.0 && q.quantity == "renyi") point.subcommand = "entropy";
      if (x == 1.0 && q.quantity == "divergence") point.kind = "relative";
    }
    if (q.over == "p") point.p_override = x;
    if (q.over == "ns") {
      point.ns = x;
      point.unconstrained = false;
    }
    points.push_back(point);
  }

  std::vector<std::vector<Row>> results(points.size());
  std::vector<std::exception_ptr> failures(points.size());
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(points.size(), q.jobs > 0 ? q.jobs : hw);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        results[i] = compute(points[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::vector<Row> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (failures[i]) std::rethrow_exception(failures[i]);
    for (Row& row : results[i]) {
      row.subcommand = "sweep:" + q.quantity;
      if (q.over == "alpha") row.alpha = points[i].alpha;
      if (q.over == "p") row.route += (row.route.empty() ? "" : ";") + std::string("p=") + number(*points[i].p_override);
      if (q.over == "ns") row.route += ";ns=" + number(*points[i].ns);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void emit(const std::vector<Row>& rows, const Request& q, std::ostream& out) {
  const std::string seed = std::to_string(q.policy.seed);
  if (q.output == "csv") {
    out << "subcommand,channel_name,alpha,value,certificate,exactness,iterations,seed,route\n";
    for (const Row& r : rows) {
      out << csv_field(r.subcommand) << ',' << csv_field(r.channel_name) << ',' << optional_number(r.alpha) << ','
          << number(r.value) << ',' << optional_number(r.certificate) << ',' << r.exactness << ',' << r.iterations
          << ',' << seed << ',' << csv_field(r.route) << '\n';
    }
    return;
  }
  if (q.output == "json") {
    json arr = json::array();
    for (const Row& r : rows) {
      json o;
      o["subcommand"] = r.subcommand;
      o["channel_name"] = r.channel_name;
      o["alpha"] = r.alpha ? json_number(*r.alpha) : json(nullptr);
      o["value"] = json_number(r.value);
      o["certificate"] = r.certificate ? json_number(*r.certificate) : json(nullptr);
      o["exactness"] = r.exactness;
      o["iterations"] = r.iterations;
      o["seed"] = q.policy.seed;
      o["route"] = r.route;
      if (r.cross_check) o["cross_check"] = json_number(*r.cross_check);
      arr.push_back(o);
    }
    out << arr.dump(2) << '\n';
    return;
  }
  for (const Row& r : rows) {
    out << r.subcommand << "  " << r.channel_name;
    if (r.alpha) out << "  alpha=" << number(*r.alpha);
    out << "  value=" << number(r.value) << "  exactness=" << r.exactness;
    if (r.certificate) out << "  certificate=" << number(*r.certificate);
    if (r.iterations > 0) out << "  iterations=" << r.iterations;
    if (!r.route.empty()) out << "  route=" << r.route;
    if (r.cross_check) out << "  cross_check=" << number(*r.cross_check);
    out << '\n';
  }
}

int check(const Request& q, std::ostream& out) {
  const auto results = acceptance::run(q.policy, q.only);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  if (q.output == "csv") {
    out << "criterion,title,passed,detail\n";
    for (const auto& r : results) {
      out << r.id << ',' << csv_field(r.title) << ',' << (r.passed ? "true" : "false") << ','
          << csv_field(r.detail) << '\n';
    }
  } else if (q.output == "json") {
    json arr = json::array();
    for (const auto& r : results) {
      json o{{"criterion", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}};
      if (q.timing) o["seconds"] = r.seconds;
      arr.push_back(o);
    }
    out << arr.dump(2) << '\n';
  } else {
    for (const auto& r : results) out << acceptance::format(r, q.timing) << '\n';
    out << results.size() - failed << "/" << results.size() << " criteria passed\n";
  }
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

void add_policy(CLI::App* app, Request& q) {
  app->add_option("--tol", q.policy.opt_tol, "Optimizer tolerance")->capture_default_str();
  app->add_option("--restarts", q.policy.restarts, "Restarts for non-concave problems")->capture_default_str();
  app->add_option("--max-iter", q.policy.max_iter, "Iteration cap per start")->capture_default_str();
  app->add_option("--seed", q.policy.seed, "Random seed")->capture_default_str();
  app->add_option("--output", q.output, "Report format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
}

void add_channel(CLI::App* app, Request& q) {
  app->add_option("--channel", q.channel_path, "Channel specification (JSON)")->required();
}

void add_divergence(CLI::App* app, Request& q, bool required) {
  auto* l = app->add_option("--left", q.left_path, "First channel N (JSON)");
  auto* r = app->add_option("--right", q.right_path, "Second channel M (JSON)");
  if (required) {
    l->required();
    r->required();
  }
  app->add_option("--kind", q.kind, "relative, renyi (sandwiched), petz or max")->capture_default_str();
  app->add_option("--mode", q.mode, "generalized, choi, adversarial-choi or adversarial")->capture_default_str();
}

void add_bosonic(CLI::App* app, Request& q) {
  app->add_option("--family", q.family, "thermal, amplifier or additive-noise")->capture_default_str();
  app->add_option("--eta", q.eta, "Thermal transmissivity")->capture_default_str();
  app->add_option("--gain", q.gain, "Amplifier gain")->capture_default_str();
  app->add_option("--xi", q.xi, "Additive noise variance")->capture_default_str();
  app->add_option("--nb", q.nb, "Environment mean photon number")->capture_default_str();
  app->add_option("--ns", q.ns, "Input mean photon number constraint");
  app->add_flag("--unconstrained", q.unconstrained, "Drop the photon-number constraint");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Request q;
  CLI::App app{"Entropies and divergences of finite-dimensional quantum channels", "chanent"};
  app.require_subcommand(1, 1);

  auto* entropy = app.add_subcommand("entropy", "Channel entropy H(N)");
  add_channel(entropy, q);
  add_policy(entropy, q);

  auto* renyi = app.add_subcommand("renyi", "Renyi channel entropy H_alpha(N)");
  add_channel(renyi, q);
  renyi->add_option("--alpha", q.alpha, "Order in [1/2, 1) or (1, inf)")->required();
  add_policy(renyi, q);

  auto* min = app.add_subcommand("min-entropy", "Min-entropy H_min(N)");
  add_channel(min, q);
  add_policy(min, q);

  auto* ext = app.add_subcommand("ext-min-entropy", "Extended min-entropy");
  add_channel(ext, q);
  add_policy(ext, q);

  auto* div = app.add_subcommand("divergence", "Channel divergence D(N||M)");
  add_divergence(div, q, true);
  div->add_option("--alpha", q.alpha, "Renyi order");
  add_policy(div, q);

  auto* suite = app.add_subcommand("choi-suite", "The five Choi entropy functions");
  add_channel(suite, q);
  suite->add_option("--alpha", q.alpha, "Order in [1/2, 1) or (1, inf)")->required();
  add_policy(suite, q);

  auto* bos = app.add_subcommand("bosonic", "Bosonic Gaussian channel entropies");
  add_bosonic(bos, q);
  add_policy(bos, q);

  auto* sw = app.add_subcommand("sweep", "Evaluate a quantity over a parameter grid");
  sw->add_option("--quantity", q.quantity, "entropy, renyi, min-entropy, ext-min-entropy, divergence or bosonic")
      ->capture_default_str();
  sw->add_option("--over", q.over, "alpha, p or ns")->capture_default_str();
  sw->add_option("--from", q.from, "First grid value")->required();
  sw->add_option("--to", q.to, "Last grid value")->required();
  sw->add_option("--steps", q.steps, "Number of grid points")->capture_default_str();
  sw->add_option("--jobs", q.jobs, "Worker threads (0: one per core)")->capture_default_str();
  sw->add_option("--channel", q.channel_path, "Channel specification (JSON)");
  sw->add_option("--alpha", q.alpha, "Renyi order when not swept");
  add_divergence(sw, q, false);
  add_bosonic(sw, q);
  add_policy(sw, q);

  auto* chk = app.add_subcommand("check", "Run the acceptance suite");
  chk->add_option("--only", q.only, "Criteria to run (default: all)")->delimiter(',');
  chk->add_flag("--timing", q.timing, "Append wall time per criterion");
  add_policy(chk, q);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  q.subcommand = app.get_subcommands().front()->get_name();
  try {
    q.policy.validate();
    if (q.subcommand == "check") return check(q, out);
    const std::vector<Row> rows = q.subcommand == "sweep" ? sweep(q) : compute(q);
    emit(rows, q, out);
    return kExitOk;
  } catch (const std::logic_error& e) {
    err << "chanent " << q.subcommand << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "chanent " << q.subcommand << ": numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace chanent::cli
