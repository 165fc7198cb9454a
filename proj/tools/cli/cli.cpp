#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <vector>

#include "semisep/adversary.hpp"
#include "semisep/bundles.hpp"
#include "semisep/error.hpp"
#include "semisep/io.hpp"
#include "semisep/semi_separable.hpp"
#include "semisep/separable.hpp"
#include "semisep/verify.hpp"

namespace semisep::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k > 0) os << ',';
    os << cells[k];
  }
  os << '\n';
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string partition_label(const PartitionSpec& p) {
  std::string s;
  for (const auto& b : p.bundles) {
    s += "{";
    for (std::size_t k = 0; k < b.members.size(); ++k) {
      if (k > 0) s += ",";
      s += std::to_string(b.members[k]);
    }
    s += "}";
  }
  return s;
}

json members_json(const PartitionSpec& p) {
  json arr = json::array();
  for (const auto& b : p.bundles) arr.push_back(b.members);
  return arr;
}

json items_json(const Instance& inst) {
  json arr = json::array();
  for (const auto& it : inst.items()) {
    arr.push_back({{"name", it.name}, {"lower", it.lower}, {"upper", it.upper}});
  }
  return arr;
}

std::vector<double> geometric(double from, double to, int points) {
  if (!(from > 0.0 && to > 0.0)) {
    throw Error(Errc::DomainError, "a geometric sweep needs positive end points");
  }
  if (points < 2) throw Error(Errc::DomainError, "a sweep needs at least 2 points");
  std::vector<double> xs;
  const double r = std::log(to / from);
  for (int k = 0; k < points; ++k) xs.push_back(from * std::exp(r * k / (points - 1)));
  xs.front() = from;
  xs.back() = to;
  return xs;
}

int cmd_solve(const RunConfig& cfg, const Instance& inst, std::ostream& out) {
  const auto sol = semi_separable::solve_gamma_star(inst, cfg.tol);
  const auto sep = separable::joint_ratio(inst);
  const auto ratios = separable::item_ratios(inst);
  std::optional<semi_separable::WorstCase> wc;
  if (sol.gamma_star > 0.0) wc = semi_separable::worst_case_ratio(sol.gamma_star, inst);

  if (cfg.format == Format::Csv) {
    std::vector<bool> active(inst.size(), false);
    for (std::size_t j : sol.active_set) active[j] = true;
    csv_row(out, {"item", "lower", "upper", "thresholded", "worst_case_value", "separable_ratio",
                  "gamma_star"});
    for (std::size_t j = 0; j < inst.size(); ++j) {
      csv_row(out, {quote_csv(inst[j].name), num(inst.lower(j)), num(inst.upper(j)),
                    active[j] ? "1" : "0", wc ? num(wc->argmin[j]) : "", num(ratios[j]),
                    num(sol.gamma_star)});
    }
    return kExitOk;
  }
  json doc;
  doc["command"] = "solve";
  doc["items"] = items_json(inst);
  doc["gamma_star"] = sol.gamma_star;
  doc["active_set"] = sol.active_set;
  json names = json::array();
  for (std::size_t j : sol.active_set) names.push_back(inst[j].name);
  doc["active_items"] = names;
  doc["degenerate"] = sol.degenerate;
  doc["phi_residual"] = sol.phi_residual;
  doc["iterations"] = sol.iterations;
  if (wc) {
    doc["worst_case"] = {{"ratio", wc->ratio}, {"valuation", wc->argmin}};
  } else {
    doc["worst_case"] = nullptr;
  }
  doc["separable"] = {{"joint_ratio", sep.ratio},
                      {"split", sep.split},
                      {"item_ratios", ratios},
                      {"worst_valuation", sep.worst_valuation}};
  doc["warnings"] = sol.warnings;
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_price_law(const RunConfig& cfg, const Instance& inst, std::ostream& out) {
  const auto sol = semi_separable::solve_gamma_star(inst, cfg.tol);
  if (sol.degenerate) {
    throw Error(Errc::DegenerateInstance, "gamma* = 0: the mechanism posts no prices");
  }
  const auto law = semi_separable::price_law(sol.gamma_star, inst);

  auto table = [&](const ItemPriceLaw& it) {
    std::vector<double> prices;
    if (it.density_start < it.upper) {
      prices = geometric(it.density_start, it.upper, cfg.grid);
    }
    if (it.atom_mass > 0.0 && (prices.empty() || prices.front() > it.lower)) {
      prices.insert(prices.begin(), it.lower);
    }
    if (prices.empty()) prices.push_back(it.upper);
    return prices;
  };

  if (cfg.format == Format::Csv) {
    csv_row(out, {"item", "price", "density", "cdf", "expected_payment", "atom_mass"});
    for (std::size_t j = 0; j < inst.size(); ++j) {
      const auto& it = law.items[j];
      for (double p : table(it)) {
        csv_row(out, {quote_csv(inst[j].name), num(p), num(it.density(p)), num(it.cdf(p)),
                      num(it.expected_payment(p)), num(p == it.lower ? it.atom_mass : 0.0)});
      }
    }
    return kExitOk;
  }
  json doc;
  doc["command"] = "price-law";
  doc["gamma"] = sol.gamma_star;
  json items = json::array();
  for (std::size_t j = 0; j < inst.size(); ++j) {
    const auto& it = law.items[j];
    json rows = json::array();
    for (double p : table(it)) {
      rows.push_back({{"price", p},
                      {"density", it.density(p)},
                      {"cdf", it.cdf(p)},
                      {"expected_payment", it.expected_payment(p)}});
    }
    items.push_back({{"name", inst[j].name},
                     {"atom_location", it.atom_location()},
                     {"atom_mass", it.atom_mass},
                     {"density_start", it.density_start},
                     {"density_end", it.upper},
                     {"continuous_mass", it.continuous_mass()},
                     {"total_mass", it.total_mass()},
                     {"table", rows}});
  }
  doc["items"] = items;
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, const Instance& inst, std::ostream& out) {
  const auto sol = semi_separable::solve_gamma_star(inst, cfg.tol);
  const double sep = separable::joint_ratio(inst).ratio;
  std::optional<double> improvement;
  if (sep > 0.0) improvement = sol.gamma_star / sep;

  std::size_t positive = 0;
  for (const auto& it : inst.items()) positive += it.zero_lower() ? 0 : 1;
  const bool zero_lower_shape = positive == 1 && inst.size() > 1;

  if (cfg.format == Format::Csv) {
    csv_row(out, {"metric", "value"});
    csv_row(out, {"gamma_star", num(sol.gamma_star)});
    csv_row(out, {"separable_ratio", num(sep)});
    csv_row(out, {"improvement", improvement ? num(*improvement) : ""});
    if (zero_lower_shape) {
      csv_row(out, {"gap_vs_separable", num(semi_separable::gap_vs_separable(inst))});
      csv_row(out, {"separable_ratio_zero_lower", num(separable::separable_ratio_zero_lower(inst))});
      csv_row(out, {"semi_separable_ratio_zero_lower",
                    num(semi_separable::semi_separable_ratio_zero_lower(inst))});
    }
    return kExitOk;
  }
  json doc;
  doc["command"] = "compare";
  doc["gamma_star"] = sol.gamma_star;
  doc["separable_ratio"] = sep;
  doc["improvement"] = improvement ? json(*improvement) : json(nullptr);
  if (zero_lower_shape) {
    doc["zero_lower"] = {
        {"gap_vs_separable", semi_separable::gap_vs_separable(inst)},
        {"separable_ratio", separable::separable_ratio_zero_lower(inst)},
        {"semi_separable_ratio", semi_separable::semi_separable_ratio_zero_lower(inst)}};
  } else {
    doc["zero_lower"] = nullptr;
  }
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_adversary(const RunConfig& cfg, const Instance& inst, std::ostream& out) {
  const double eta = adversary::eta_star(inst, cfg.tol);
  const auto dist = adversary::AdversaryDistribution::build(eta, inst);

  if (cfg.format == Format::Csv) {
    std::vector<std::string> header{"xi"};
    for (std::size_t j = 0; j < inst.size(); ++j) header.push_back("v_" + std::to_string(j + 1));
    csv_row(out, header);
    for (const auto& s : dist.sample(cfg.samples, cfg.seed)) {
      std::vector<std::string> row{num(s.xi)};
      for (double x : s.v) row.push_back(num(x));
      csv_row(out, row);
    }
    return kExitOk;
  }
  json doc;
  doc["command"] = "adversary";
  doc["eta"] = eta;
  doc["omega"] = dist.omega();
  doc["zeta"] = dist.zeta();
  doc["breakpoints"] = dist.breakpoints();
  doc["best_response_value"] = dist.best_response_value();
  doc["optimal_prices"] = dist.optimal_prices();
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const Instance& inst, std::ostream& out) {
  verify::SaddleOptions opts;
  opts.tol = cfg.tol;
  opts.grid = cfg.grid;
  const auto rep = verify::saddle_certificate(inst, opts);

  if (cfg.format == Format::Csv) {
    csv_row(out, {"metric", "value"});
    csv_row(out, {"gamma_star", num(rep.gamma_star)});
    csv_row(out, {"grid_min_ratio", num(rep.grid_min_ratio)});
    csv_row(out, {"best_response_value", num(rep.best_response_value)});
    csv_row(out, {"best_response_exact", num(rep.best_response_exact)});
    csv_row(out, {"max_ic_violation", num(rep.max_ic_violation)});
    csv_row(out, {"max_ir_violation", num(rep.max_ir_violation)});
    csv_row(out, {"grid_resolution", std::to_string(rep.grid_resolution)});
    csv_row(out, {"verdict", rep.pass ? "pass" : "fail"});
  } else {
    json doc;
    doc["command"] = "verify";
    doc["gamma_star"] = rep.gamma_star;
    doc["grid_min_ratio"] = rep.grid_min_ratio;
    doc["grid_argmin"] = rep.grid_argmin;
    doc["best_response_value"] = rep.best_response_value;
    doc["best_response_exact"] = rep.best_response_exact;
    doc["max_ic_violation"] = rep.max_ic_violation;
    doc["max_ir_violation"] = rep.max_ir_violation;
    doc["grid_resolution"] = rep.grid_resolution;
    doc["ic_grid_resolution"] = rep.ic_grid_resolution;
    doc["ic_method"] = rep.ic_method;
    doc["tol"] = opts.tol;
    doc["verdict"] = rep.pass ? "pass" : "fail";
    out << doc.dump(2) << '\n';
  }
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

int cmd_bundle_solve(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  const bool is_partition = raw.is_object() && raw.contains("bundles");
  if (!is_partition && !(raw.is_object() && raw.contains("subsets"))) {
    throw Error(Errc::ParseError, "expected a 'bundles' or 'subsets' array");
  }

  std::vector<bundles::Candidate> candidates;
  std::optional<bundles::BundleSolution> best;
  if (is_partition) {
    best = bundles::solve_partition(io::parse_partition(text), cfg.tol);
    candidates.push_back({best->partition, best->gamma()});
  } else {
    auto choice = bundles::best_partition(io::parse_collection(text), cfg.tol);
    candidates = std::move(choice.candidates);
    best = std::move(choice.best);
  }

  if (cfg.format == Format::Csv) {
    csv_row(out, {"candidate", "partition", "bundles", "gamma", "best"});
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      const auto& c = candidates[k];
      csv_row(out, {std::to_string(k), quote_csv(partition_label(c.partition)),
                    std::to_string(c.partition.bundles.size()), num(c.gamma),
                    c.partition == best->partition ? "1" : "0"});
    }
    return kExitOk;
  }
  json bounds = json::array();
  for (const auto& b : best->partition.bundles) {
    bounds.push_back({{"lower", b.lower}, {"upper", b.upper}});
  }
  json doc;
  doc["command"] = "bundle-solve";
  doc["mode"] = is_partition ? "partition" : "collection";
  doc["item_count"] = best->partition.item_count;
  doc["best"] = {{"partition", members_json(best->partition)},
                 {"bounds", bounds},
                 {"gamma", best->gamma()},
                 {"active_bundles", best->active_bundles()}};
  json cands = json::array();
  for (const auto& c : candidates) {
    cands.push_back({{"partition", members_json(c.partition)}, {"gamma", c.gamma}});
  }
  doc["candidates"] = cands;
  doc["guarantee"] = best->gamma();
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const Instance& inst, std::ostream& out) {
  if (cfg.sweep_item >= inst.size()) {
    throw Error(Errc::InvalidIndex, "sweep item " + std::to_string(cfg.sweep_item) +
                                        " does not exist");
  }
  const bool lower = cfg.sweep_bound == "lower";
  if (!lower && cfg.sweep_bound != "upper") {
    throw Error(Errc::DomainError, "sweep bound must be 'lower' or 'upper'");
  }
  const double up = inst.upper(cfg.sweep_item);
  const double from = cfg.sweep_from.value_or(lower ? 1e-4 : up);
  const double to = cfg.sweep_to.value_or(lower ? 0.5 : 100.0 * up);

  struct Row {
    double parameter, separable, semi;
  };
  std::vector<Row> rows;
  for (double x : geometric(from, to, cfg.sweep_points)) {
    auto items = inst.items();
    (lower ? items[cfg.sweep_item].lower : items[cfg.sweep_item].upper) = x;
    const auto swept = Instance::validate(std::move(items));
    rows.push_back({x, separable::joint_ratio(swept).ratio,
                    semi_separable::solve_gamma_star(swept, cfg.tol).gamma_star});
  }

  if (cfg.format == Format::Csv) {
    csv_row(out, {"parameter", "separable_ratio", "semi_separable_ratio"});
    for (const auto& r : rows) csv_row(out, {num(r.parameter), num(r.separable), num(r.semi)});
    return kExitOk;
  }
  json doc;
  doc["command"] = "sweep";
  doc["item"] = inst[cfg.sweep_item].name;
  doc["item_index"] = cfg.sweep_item;
  doc["bound"] = cfg.sweep_bound;
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"parameter", r.parameter},
                   {"separable_ratio", r.separable},
                   {"semi_separable_ratio", r.semi}});
  }
  doc["rows"] = arr;
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  const std::string text = io::read_file(cfg.input_path);
  if (cfg.command == "bundle-solve") return cmd_bundle_solve(cfg, text, out);

  const Instance inst = io::parse_instance(text);
  if (cfg.command == "solve") return cmd_solve(cfg, inst, out);
  if (cfg.command == "price-law") return cmd_price_law(cfg, inst, out);
  if (cfg.command == "compare") return cmd_compare(cfg, inst, out);
  if (cfg.command == "adversary") return cmd_adversary(cfg, inst, out);
  if (cfg.command == "verify") return cmd_verify(cfg, inst, out);
  if (cfg.command == "sweep") return cmd_sweep(cfg, inst, out);
  throw Error(Errc::DomainError, "unknown command '" + cfg.command + "'");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!(config.tol > 0.0)) {
    err << "error: --tol must be positive\n";
    return kExitInputError;
  }
  if (config.grid < 2) {
    err << "error: --grid must be at least 2\n";
    return kExitInputError;
  }
  try {
    if (!config.output_path) return dispatch(config, out);
    std::ostringstream buffer;
    const int code = dispatch(config, buffer);
    std::ofstream file(*config.output_path, std::ios::binary);
    if (!file || !(file << buffer.str())) {
      err << "error: cannot write " << *config.output_path << '\n';
      return kExitInputError;
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust multi-item screening under support-only information"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "json";
  std::string output;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"solve", "optimal gamma*, active set, worst case and separable baseline"},
      {"price-law", "randomized posted prices implementing M_gamma*"},
      {"compare", "separable vs semi-separable ratios"},
      {"adversary", "worst-case ray distribution (JSON summary, CSV samples)"},
      {"verify", "numerical saddle-point certificate"},
      {"bundle-solve", "partition or collection of bundles"},
      {"sweep", "ratios while one bound varies geometrically"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--input", cfg.input_path, "instance JSON")->required();
    sub->add_option("--tol", cfg.tol, "tolerance")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
    sub->add_option("--grid", cfg.grid, "grid points per dimension")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "sample count")->capture_default_str();
    sub->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--output", output, "write here instead of stdout");
    if (name == "sweep") {
      sub->add_option("--item", cfg.sweep_item, "item index")->capture_default_str();
      sub->add_option("--bound", cfg.sweep_bound, "lower or upper")
          ->check(CLI::IsMember({"lower", "upper"}))
          ->capture_default_str();
      sub->add_option("--from", cfg.sweep_from, "first value");
      sub->add_option("--to", cfg.sweep_to, "last value");
      sub->add_option("--points", cfg.sweep_points, "number of values")->capture_default_str();
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = format == "csv" ? Format::Csv : Format::Json;
  if (!output.empty()) cfg.output_path = output;
  return run(cfg, out, err);
}

}  // namespace semisep::cli
