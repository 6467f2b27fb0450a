// permlim: command-line front end for the permlim library.
//
// Exit status: 0 success, 1 invalid input, 2 guard limit exceeded,
// 3 internal invariant violated.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "permlim/io.hpp"
#include "permlim/permlim.hpp"

namespace {

using namespace permlim;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  std::string output;
  std::size_t threads = 1;
  std::string format;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool is_file(const std::string& arg) {
  std::error_code ec;
  return std::filesystem::is_regular_file(arg, ec);
}

bool looks_like_json(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && text[first] == '{';
}

// Inline text, or the first permutation in a file.
Permutation load_permutation(const std::string& arg) {
  if (!is_file(arg)) return parse_permutation(arg);
  std::ifstream in(arg);
  auto perms = read_permutations(in);
  if (perms.empty()) throw InputError("'" + arg + "' contains no permutation");
  return perms.front();
}

Permuton load_permuton(const std::string& arg) {
  return permuton_from_json_text(is_file(arg) ? slurp(arg) : arg);
}

// Either a permutation (inline or file) or a permuton JSON spec (inline or file).
struct Operand {
  std::optional<Permutation> perm;
  std::optional<Permuton> permuton;

  StepCdf<Rational> cdf() const { return perm ? StepCdf<Rational>::of(*perm) : StepCdf<Rational>::of(*permuton); }
};

Operand load_operand(const std::string& arg) {
  const std::string text = is_file(arg) ? slurp(arg) : arg;
  if (looks_like_json(text)) return {std::nullopt, permuton_from_json_text(text)};
  return {load_permutation(arg), std::nullopt};
}

std::vector<Permutation> parse_pattern_list(const std::string& text) {
  std::vector<Permutation> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(parse_permutation(item));
  }
  if (out.empty()) throw InputError("no patterns given");
  return out;
}

std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw InputError("bad index '" + item + "'");
    }
  }
  if (out.empty()) throw InputError("no indices given");
  return out;
}

Json rect_json(const Rectangle<Rational>& r) {
  return Json{{"x1", to_string(r.x1)}, {"x2", to_string(r.x2)}, {"y1", to_string(r.y1)}, {"y2", to_string(r.y2)}};
}

Json distance_json(const DistanceReport& d) {
  Json out{{"value", to_string(d.value)}, {"value_float", to_double(d.value)}, {"witness", rect_json(d.witness)}};
  if (d.intervals) {
    out["intervals"] = Json{{"S", {d.intervals->s_begin, d.intervals->s_end}},
                            {"T", {d.intervals->t_begin, d.intervals->t_end}}};
  }
  return out;
}

void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------- count

struct CountOptions {
  std::string perm, pattern;
  std::size_t k = 0;
};

void run_count(const CountOptions& o, const Globals& g, std::ostream& out) {
  const Permutation pi = load_permutation(o.perm);
  if (!o.pattern.empty()) {
    const Permutation tau = parse_permutation(o.pattern);
    const BigInt count = occurrences(tau, pi);
    emit_json(out, Json{{"pattern", tau.to_string()},
                        {"n", pi.size()},
                        {"occurrences", count.str()},
                        {"density", rational_json(density(tau, pi))}});
    return;
  }
  if (o.k == 0) throw InputError("count needs --pattern or --k");
  const PatternDistribution dist = pattern_distribution(pi, o.k);
  if (g.format == "json") {
    Json rows = Json::array();
    for (const auto& [tau, value] : dist.entries()) {
      rows.push_back(Json{{"pattern", tau.to_string()}, {"density", rational_json(value)}});
    }
    emit_json(out, Json{{"k", o.k}, {"n", pi.size()}, {"distribution", rows}});
  } else {
    write_distribution_csv(out, dist);
  }
}

// ---------------------------------------------------------------- density

struct DensityOptions {
  std::string perm, permuton, pattern;
  bool exact = false, mc = false;
  std::uint64_t trials = 100000;
};

void run_density(const DensityOptions& o, const Globals& g, std::ostream& out) {
  const Permutation tau = parse_permutation(o.pattern);
  if (!o.perm.empty()) {
    const Permutation pi = load_permutation(o.perm);
    const Rational value = density(tau, pi);
    emit_json(out, Json{{"estimate", to_double(value)},
                        {"stderr", 0.0},
                        {"trials", 0},
                        {"method", "exact"},
                        {"exact", to_string(value)}});
    return;
  }
  if (o.permuton.empty()) throw InputError("density needs --perm or --permuton");
  const Permuton z = load_permuton(o.permuton);
  if (o.mc) {
    Rng rng(g.seed);
    const DensityEstimate e = density_in_permuton_mc(z, tau, o.trials, rng);
    emit_json(out, Json{{"seed", g.seed},
                        {"estimate", e.estimate},
                        {"stderr", e.std_error},
                        {"trials", e.trials},
                        {"method", to_string(e.method)}});
    return;
  }
  const Rational value = density_in_permuton_exact(z, tau);
  emit_json(out, Json{{"estimate", to_double(value)},
                      {"stderr", 0.0},
                      {"trials", 0},
                      {"method", "exact"},
                      {"exact", to_string(value)}});
}

// ---------------------------------------------------------------- sample

struct SampleOptions {
  std::string permuton;
  std::size_t n = 0;
  bool points = false;
};

void run_sample(const SampleOptions& o, const Globals& g, std::ostream& out) {
  const Permuton z = load_permuton(o.permuton);
  const PointSample sample = sample_points(z, o.n, g.seed);
  if (o.points) {
    out << "# seed: " << g.seed << '\n';
    write_points_csv(out, sample);
    return;
  }
  const Permutation sigma = pattern_by_sorting(sample);
  emit_json(out, Json{{"seed", g.seed}, {"n", o.n}, {"permutation", sigma.values()}});
}

// ---------------------------------------------------------------- dist / disc

struct DistOptions {
  std::string a, b, metric = "square";
};

void run_dist(const DistOptions& o, const Globals&, std::ostream& out) {
  const Operand a = load_operand(o.a);
  const Operand b = load_operand(o.b);
  Json result;
  if (o.metric == "infty") {
    result = distance_json(d_infty(a.cdf(), b.cdf()));
  } else if (a.perm && b.perm && a.perm->size() == b.perm->size()) {
    result = distance_json(d_square_perms(*a.perm, *b.perm));
  } else {
    result = distance_json(d_square(a.cdf(), b.cdf()));
  }
  Json head{{"metric", o.metric}};
  head.update(result);
  emit_json(out, head);
}

void run_disc(const std::string& perm, const Globals&, std::ostream& out) {
  const Permutation sigma = load_permutation(perm);
  Json head{{"n", sigma.size()}};
  head.update(distance_json(discrepancy(sigma)));
  emit_json(out, head);
}

// ---------------------------------------------------------------- estimate

void run_estimate(const std::string& perm, std::size_t m, const Globals&, std::ostream& out) {
  emit_json(out, permuton_to_json(estimate_permuton(load_permutation(perm), m)));
}

// ---------------------------------------------------------------- converge

struct ConvergeOptions {
  std::string seq, patterns, indices;
  double epsilon = 0.05;
};

struct SequenceSource {
  std::unique_ptr<PermutationSequence> seq;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<Permutation>> listed;  // file contents, for the constancy check
};

SequenceSource make_sequence(const std::string& spec, const Globals& g) {
  if (spec == "identity") return {std::make_unique<IdentitySequence>(), std::nullopt, std::nullopt};
  if (spec == "reverse") return {std::make_unique<ReverseSequence>(), std::nullopt, std::nullopt};
  if (spec == "alternating") return {std::make_unique<AlternatingSequence>(), std::nullopt, std::nullopt};
  if (spec.rfind("constant:", 0) == 0) {
    return {std::make_unique<ConstantSequence>(parse_permutation(spec.substr(9))), std::nullopt, std::nullopt};
  }
  if (spec.rfind("nested:", 0) == 0) {
    return {std::make_unique<NestedZRandomSequence>(load_permuton(spec.substr(7)), g.seed), g.seed, std::nullopt};
  }
  if (!is_file(spec)) throw InputError("unknown sequence '" + spec + "'");
  // Every line is a term, so blank or comment lines are rejected here.
  std::ifstream in(spec);
  std::vector<Permutation> items;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    try {
      items.push_back(parse_permutation(line));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return {std::make_unique<ListSequence>(items), std::nullopt, items};
}

void run_converge(const ConvergeOptions& o, const Globals& g, std::ostream& out) {
  const auto patterns = parse_pattern_list(o.patterns);
  const auto indices = parse_indices(o.indices);

  // Two independent passes, since sequences are forward-only.
  SequenceSource first = make_sequence(o.seq, g);
  const TrajectoryTable table = density_trajectory(*first.seq, patterns, indices);
  SequenceSource second = make_sequence(o.seq, g);
  const CauchyReport cauchy = cauchy_check(*second.seq, indices, o.epsilon);
  std::optional<EventualConstancy> constancy;
  if (first.listed) constancy = eventually_constant_check(*first.listed);

  if (g.format == "json") {
    Json head;
    if (first.seed) head["seed"] = *first.seed;
    Json pats = Json::array();
    for (const auto& p : patterns) pats.push_back(p.to_string());
    head["patterns"] = pats;
    Json rows = Json::array();
    for (std::size_t r = 0; r < table.indices.size(); ++r) {
      Json values = Json::array();
      for (const auto& v : table.values[r]) values.push_back(rational_json(v));
      rows.push_back(Json{{"index", table.indices[r]}, {"length", table.lengths[r]}, {"densities", values}});
    }
    head["trajectory"] = rows;
    Json windows = Json::array();
    for (const auto& w : cauchy.windows) {
      windows.push_back(Json{{"from_index", w.from_index},
                             {"max_distance", w.max_distance},
                             {"argmax", {w.argmax_first, w.argmax_second}},
                             {"within_epsilon", w.within_epsilon}});
    }
    head["cauchy"] = Json{{"epsilon", cauchy.epsilon}, {"windows", windows}};
    if (constancy) {
      head["eventually_constant"] =
          Json{{"bounded_lengths", constancy->bounded_lengths},
               {"constant_tail_from", constancy->constant_tail_from ? Json(*constancy->constant_tail_from) : Json()}};
    }
    emit_json(out, head);
    return;
  }

  if (first.seed) out << "# seed: " << *first.seed << '\n';
  out << "index,length";
  for (const auto& p : patterns) out << ',' << p.to_string("-");
  out << '\n';
  for (std::size_t r = 0; r < table.indices.size(); ++r) {
    out << table.indices[r] << ',' << table.lengths[r];
    for (const auto& v : table.values[r]) out << ',' << format_double(to_double(v));
    out << '\n';
  }
  out << "\nfrom_index,max_distance,argmax_first,argmax_second,within_epsilon\n";
  for (const auto& w : cauchy.windows) {
    out << w.from_index << ',' << format_double(w.max_distance) << ',' << w.argmax_first << ',' << w.argmax_second
        << ',' << (w.within_epsilon ? "true" : "false") << '\n';
  }
  if (constancy) {
    out << "\nbounded_lengths,constant_tail_from\n"
        << (constancy->bounded_lengths ? "true" : "false") << ','
        << (constancy->constant_tail_from ? std::to_string(*constancy->constant_tail_from) : "") << '\n';
  }
}

// ---------------------------------------------------------------- experiment

struct ExperimentOptions {
  std::string permuton;
  std::size_t k = 0, trials = 10, resolution = 1024;
};

void run_experiment(const ExperimentOptions& o, const Globals& g, std::ostream& out) {
  const Permuton z = load_permuton(o.permuton);
  const ConcentrationReport report = concentration_experiment(z, o.k, o.trials, g.seed, o.resolution, g.threads);
  if (g.format == "csv") {
    out << "# seed: " << g.seed << ", k: " << o.k << ", bound: " << format_double(report.bound) << '\n';
    out << "trial,seed,d_infty_grid,envelope,d_square_upper,within_bound\n";
    for (std::size_t t = 0; t < report.trials.size(); ++t) {
      const auto& tr = report.trials[t];
      out << t << ',' << tr.seed << ',' << format_double(tr.distance.d_infty_grid) << ','
          << format_double(tr.distance.envelope) << ',' << format_double(tr.distance.d_square_upper) << ','
          << (tr.within_bound ? "true" : "false") << '\n';
    }
    return;
  }
  Json trials = Json::array();
  for (const auto& tr : report.trials) {
    trials.push_back(Json{{"seed", tr.seed},
                          {"d_infty_grid", tr.distance.d_infty_grid},
                          {"envelope", tr.distance.envelope},
                          {"d_square_upper", tr.distance.d_square_upper},
                          {"within_bound", tr.within_bound}});
  }
  emit_json(out, Json{{"seed", g.seed},
                      {"k", o.k},
                      {"resolution", o.resolution},
                      {"bound", report.bound},
                      {"vacuous", report.vacuous},
                      {"successes", report.successes},
                      {"frequency", report.frequency()},
                      {"trials", trials}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation patterns, permutons and limit diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--output,-o", g.output, "Write to this file instead of stdout");
  app.add_option("--threads", g.threads, "Worker cap for parallel experiments")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  CountOptions count;
  auto* c_count = app.add_subcommand("count", "Pattern occurrences or the full length-k distribution");
  c_count->add_option("--perm", count.perm, "Permutation or file")->required();
  c_count->add_option("--pattern", count.pattern, "Pattern τ");
  c_count->add_option("--k", count.k, "Emit the density of every pattern of length k");

  DensityOptions dens;
  auto* c_density = app.add_subcommand("density", "Pattern density in a permutation or permuton");
  c_density->add_option("--pattern", dens.pattern, "Pattern τ")->required();
  auto* perm_opt = c_density->add_option("--perm", dens.perm, "Permutation or file");
  auto* permuton_opt = c_density->add_option("--permuton", dens.permuton, "Permuton JSON spec or file");
  perm_opt->excludes(permuton_opt);
  auto* exact_flag = c_density->add_flag("--exact", dens.exact, "Closed-form evaluation (default)");
  auto* mc_flag = c_density->add_flag("--mc", dens.mc, "Monte Carlo estimate");
  exact_flag->excludes(mc_flag);
  c_density->add_option("--trials", dens.trials, "Monte Carlo trials")->capture_default_str();

  SampleOptions samp;
  auto* c_sample = app.add_subcommand("sample", "Draw a Z-random permutation or point sample");
  c_sample->add_option("--permuton", samp.permuton, "Permuton JSON spec or file")->required();
  c_sample->add_option("--n", samp.n, "Sample size")->required()->check(CLI::PositiveNumber);
  c_sample->add_flag("--points", samp.points, "Emit the points as CSV");

  DistOptions dist;
  auto* c_dist = app.add_subcommand("dist", "Rectangular or sup distance");
  c_dist->add_option("--a", dist.a, "Permutation, permuton spec, or file")->required();
  c_dist->add_option("--b", dist.b, "Permutation, permuton spec, or file")->required();
  c_dist->add_option("--metric", dist.metric)->check(CLI::IsMember({"square", "infty"}))->capture_default_str();

  std::string disc_perm;
  auto* c_disc = app.add_subcommand("disc", "Discrepancy of a permutation");
  c_disc->add_option("--perm", disc_perm, "Permutation or file")->required();

  std::string est_perm;
  std::size_t est_resolution = 0;
  auto* c_estimate = app.add_subcommand("estimate", "Grid permuton estimate of a permutation");
  c_estimate->add_option("--perm", est_perm, "Permutation or file")->required();
  c_estimate->add_option("--resolution", est_resolution, "Grid size m")->required();

  ConvergeOptions conv;
  auto* c_converge = app.add_subcommand("converge", "Density trajectories and Cauchy windows");
  c_converge
      ->add_option("--seq", conv.seq,
                   "File (line n is σ_n) or identity|reverse|alternating|constant:<perm>|nested:<spec>")
      ->required();
  c_converge->add_option("--patterns", conv.patterns, "Patterns separated by ';'")->required();
  c_converge->add_option("--indices", conv.indices, "Comma-separated increasing indices")->required();
  c_converge->add_option("--epsilon", conv.epsilon)->capture_default_str();

  ExperimentOptions exp;
  auto* c_experiment = app.add_subcommand("experiment", "Concentration of σ(k,Z) around Z");
  c_experiment->add_option("--permuton", exp.permuton, "Permuton JSON spec or file")->required();
  c_experiment->add_option("--k", exp.k, "Sample size")->required()->check(CLI::PositiveNumber);
  c_experiment->add_option("--trials", exp.trials)->capture_default_str();
  c_experiment->add_option("--resolution", exp.resolution, "Lattice size")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::ostringstream out;
  try {
    if (*c_count) {
      if (g.format.empty()) g.format = count.pattern.empty() ? "csv" : "json";
      run_count(count, g, out);
    } else if (*c_density) {
      run_density(dens, g, out);
    } else if (*c_sample) {
      run_sample(samp, g, out);
    } else if (*c_dist) {
      run_dist(dist, g, out);
    } else if (*c_disc) {
      run_disc(disc_perm, g, out);
    } else if (*c_estimate) {
      run_estimate(est_perm, est_resolution, g, out);
    } else if (*c_converge) {
      if (g.format.empty()) g.format = "csv";
      run_converge(conv, g, out);
    } else if (*c_experiment) {
      if (g.format.empty()) g.format = "json";
      run_experiment(exp, g, out);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const GuardError& e) {
    std::cerr << "limit: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }

  if (g.output.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(g.output, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write '" << g.output << "'\n";
      return 1;
    }
    file << out.str();
  }
  return 0;
}
