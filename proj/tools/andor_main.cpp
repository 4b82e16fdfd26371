// Batch experiment driver for random and/or tree models: sampling, trimming,
// distribution estimation, scaling regressions, and the acceptance suite.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "andor/checks.hpp"
#include "andor/complexity.hpp"
#include "andor/limitdist.hpp"
#include "andor/parallel.hpp"
#include "andor/trimming.hpp"
#include "json.hpp"

namespace {

using namespace andor;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitChecksFailed = 3;

struct ModelArgs {
  std::string model;
  int leaves = 0;
  int nodes = 0;
  int n = 0;
  int height = -1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

OffspringDist offspring_for(const std::string& spec) {
  if (spec == "catalan") return OffspringDist::catalan();
  if (starts_with(spec, "assoc:")) return associative_offspring(std::stoi(spec.substr(6)));
  if (starts_with(spec, "gw:")) return OffspringDist::from_json_text(read_file(spec.substr(3)));
  throw std::invalid_argument("unknown offspring model: " + spec);
}

bool is_spine_model(const std::string& model) { return starts_with(model, "spine:"); }

SpineSpec spine_for(const std::string& model) {
  std::string rest = model.substr(6);
  if (starts_with(rest, "alpha:")) return SpineSpec::ford_alpha(std::stod(rest.substr(6)));
  return SpineSpec::branching(offspring_for(rest));
}

TreeModel tree_model_for(const ModelArgs& args) {
  const std::string& m = args.model;
  if (m == "leaf") return TreeModel::fixed(TreeShape::single_leaf(), "leaf");
  if (starts_with(m, "expr:"))  // fixed shape taken from an expression
    return TreeModel::fixed(parse(m.substr(5)).shape, m);
  if (m == "balanced") {
    if (args.height < 0) throw std::invalid_argument("balanced needs --height");
    return TreeModel::fixed(balanced_binary(args.height),
                            "balanced:" + std::to_string(args.height));
  }
  if (m == "bst") {
    if (args.n < 1) throw std::invalid_argument("bst needs --n");
    return TreeModel::bst(args.n);
  }
  if (starts_with(m, "alpha:")) {
    if (args.n < 1) throw std::invalid_argument("alpha needs --n");
    return TreeModel::ford_alpha(args.n, std::stod(m.substr(6)));
  }
  OffspringDist d = offspring_for(m);
  if (args.leaves > 0)
    return TreeModel::gw_conditioned(d, args.leaves, SizeMode::Leaves,
                                     m + ":leaves:" + std::to_string(args.leaves));
  if (args.nodes > 0)
    return TreeModel::gw_conditioned(d, args.nodes, SizeMode::TotalNodes,
                                     m + ":nodes:" + std::to_string(args.nodes));
  throw std::invalid_argument("conditioned models need --leaves or --nodes");
}

// ---- sample ---------------------------------------------------------------

int cmd_sample(const ModelArgs& margs, int k, std::uint64_t seed, int count,
               const std::string& stats, std::uint64_t trials, int threads,
               const std::string& format, const std::string& out_path) {
  if (is_spine_model(margs.model))
    throw std::invalid_argument("sample works on finite-tree models");
  TreeModel model = tree_model_for(margs);
  std::string out;

  if (stats.empty()) {
    std::string body;
    for (int i = 0; i < count; ++i) {
      Rng rng = task_rng(seed, static_cast<std::uint64_t>(i));
      TreeShape shape = model.sample(rng);
      body += serialize(random_labelling(shape, k, rng));
      body += '\n';
    }
    write_output(out_path, body);
    return kExitOk;
  }

  struct Partial {
    std::map<int, std::uint64_t> hist;
    double sum = 0;
  };
  auto measure = [&](const TreeShape& t) -> int {
    if (stats == "saturation") return saturation_level(t);
    if (stats == "size") return size(t);
    // split: leaves under the first root child; 0 for a single leaf
    if (t.is_leaf(t.root())) return 0;
    int c0 = t.nodes[t.root()].children[0];
    int leaves = 0;
    std::vector<int> stack{c0};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (t.is_leaf(v)) ++leaves;
      for (int c : t.nodes[v].children) stack.push_back(c);
    }
    return leaves;
  };
  if (stats != "saturation" && stats != "size" && stats != "split")
    throw std::invalid_argument("--stats must be split, saturation or size");

  auto res = run_chunked<Partial>(
      trials, 1024, threads,
      [&](std::uint64_t begin, std::uint64_t end, Partial& part) {
        for (std::uint64_t i = begin; i < end; ++i) {
          Rng rng = task_rng(seed, i);
          int v = measure(model.sample(rng));
          ++part.hist[v];
          part.sum += v;
        }
      },
      [](Partial& acc, Partial& p) {
        for (auto& [v, c] : p.hist) acc.hist[v] += c;
        acc.sum += p.sum;
      });

  double mean = res.sum / static_cast<double>(trials);
  if (format == "csv") {
    std::string body = "value,count,p";
    bool is_split = stats == "split" && model.kind == TreeModel::Kind::Alpha;
    if (is_split) body += ",q_ref";
    body += "\n";
    for (const auto& [v, c] : res.hist) {
      body += std::to_string(v) + "," + std::to_string(c) + "," +
              format_double(static_cast<double>(c) / static_cast<double>(trials));
      if (is_split)
        body += "," + format_double(v >= 1 && v < model.n
                                        ? alpha_split_pmf(model.n, model.alpha, v)
                                        : 0.0);
      body += "\n";
    }
    body += "mean," + format_double(mean) + ",\n";
    write_output(out_path, body);
  } else {
    nlohmann::json j;
    j["model"] = model.name;
    j["stat"] = stats;
    j["trials"] = trials;
    j["seed"] = seed;
    j["mean"] = mean;
    if (stats == "saturation" && margs.n > 1)
      j["mean_over_log_n"] = mean / std::log(static_cast<double>(margs.n));
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [v, c] : res.hist) {
      nlohmann::json row;
      row["value"] = v;
      row["count"] = c;
      row["p"] = static_cast<double>(c) / static_cast<double>(trials);
      if (stats == "split" && model.kind == TreeModel::Kind::Alpha && v >= 1 &&
          v < model.n)
        row["q_ref"] = alpha_split_pmf(model.n, model.alpha, v);
      arr.push_back(row);
    }
    j["histogram"] = arr;
    write_output(out_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---- trim -----------------------------------------------------------------

int cmd_trim(const std::string& expr, const std::string& in_path, int k,
             const std::string& out_path) {
  std::string text = expr;
  if (text.empty() && !in_path.empty()) text = read_file(in_path);
  if (text.empty()) throw std::invalid_argument("trim needs --expr or --in");
  AndOrTree tree = parse(text);
  int arity = k > 0 ? k : max_var(tree);
  if (max_var(tree) > arity)
    throw std::invalid_argument("--k is smaller than the largest variable");
  write_output(out_path, trim_report_json(tree, arity) + "\n");
  return kExitOk;
}

// ---- dist -------------------------------------------------------------------

int cmd_dist(const ModelArgs& margs, int k, std::uint64_t trials,
             std::uint64_t seed, int threads, int depth_cap,
             std::uint64_t work_budget, bool exact, const std::string& out_path) {
  std::string body;
  if (exact) {
    if (is_spine_model(margs.model))
      throw std::invalid_argument("--exact needs a finite-tree model");
    TreeModel model = tree_model_for(margs);
    if (model.kind != TreeModel::Kind::FixedShape)
      throw std::invalid_argument(
          "--exact needs a fixed shape (leaf, balanced, or expr:<text>)");
    body = exact_dist(model.shape, k).to_json();
  } else if (is_spine_model(margs.model)) {
    SpineEvaluator::Caps caps;
    caps.depth_cap = depth_cap;
    caps.work_budget = work_budget;
    body = mc_dist_spine(spine_for(margs.model), k, trials, seed, caps, threads)
               .to_json();
  } else {
    body = mc_dist(tree_model_for(margs), k, trials, seed, threads).to_json();
  }
  write_output(out_path, body + "\n");
  return kExitOk;
}

// ---- scaling ----------------------------------------------------------------

int cmd_scaling(const ModelArgs& margs, const std::string& fn_text,
                const std::vector<int>& ks, std::uint64_t trials,
                std::uint64_t seed, int threads, int depth_cap,
                std::uint64_t work_budget, const std::string& out_path) {
  if (!is_spine_model(margs.model))
    throw std::invalid_argument("scaling runs on spine models");
  BoolFn f = BoolFn::from_text(fn_text);
  SpineEvaluator::Caps caps;
  caps.depth_cap = depth_cap;
  caps.work_budget = work_budget;
  ScalingReport rep = scaling_exponent(spine_for(margs.model), f, ks, trials, seed,
                                       caps, threads);
  if (!rep.warning.empty()) std::cerr << "warning: " << rep.warning << "\n";
  write_output(out_path, rep.to_csv());
  return kExitOk;
}

// ---- table ------------------------------------------------------------------

int cmd_table(int k, int max_size, const std::string& out_path) {
  ComplexityTable table(k, max_size);
  write_output(out_path, table.to_csv());
  return kExitOk;
}

// ---- checks -----------------------------------------------------------------

int cmd_checks(const std::string& suite, std::uint64_t seed, int threads,
               const std::string& out_path) {
  if (suite != "acceptance")
    throw std::invalid_argument("unknown suite: " + suite);
  auto results = run_acceptance(seed, threads, &std::cout);
  if (!out_path.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
      nlohmann::json row;
      row["id"] = r.id;
      row["name"] = r.name;
      row["pass"] = r.pass;
      row["detail"] = r.detail;
      arr.push_back(row);
    }
    write_output(out_path, arr.dump(2) + "\n");
  }
  return all_passed(results) ? kExitOk : kExitChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random and/or trees: samplers, trimming, induced distributions"};
  app.require_subcommand(1);

  ModelArgs margs;
  int k = 1;
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
  int threads = default_threads();
  int depth_cap = 100000;
  std::uint64_t work_budget = 20'000'000;
  std::string out_path, format = "json";

  auto add_model_opts = [&](CLI::App* cmd, bool needs_seed = true) {
    cmd->add_option("--model", margs.model, "model preset")->required();
    cmd->add_option("--leaves", margs.leaves, "condition on leaf count");
    cmd->add_option("--nodes", margs.nodes, "condition on node count");
    cmd->add_option("--n", margs.n, "size parameter (bst/alpha)");
    cmd->add_option("--height", margs.height, "height (balanced)");
    auto* s = cmd->add_option("--seed", seed, "master seed");
    if (needs_seed) s->required();
    cmd->add_option("--threads", threads, "worker threads");
    cmd->add_option("--out", out_path, "output path (default stdout)");
  };

  auto* sample = app.add_subcommand("sample", "sample trees or shape statistics");
  int count = 1;
  std::string stats;
  add_model_opts(sample);
  sample->add_option("--k", k, "number of variables");
  sample->add_option("--count", count, "number of labelled trees to emit");
  sample->add_option("--stats", stats, "split | saturation | size");
  sample->add_option("--trials", trials, "trials for --stats");
  sample->add_option("--format", format, "json | csv");

  auto* trim_cmd = app.add_subcommand("trim", "trim an expression, report JSON");
  std::string expr, in_path;
  int trim_k = 0;
  trim_cmd->add_option("--expr", expr, "expression text");
  trim_cmd->add_option("--in", in_path, "read expression from file");
  trim_cmd->add_option("--k", trim_k, "number of variables (default: max index)");
  trim_cmd->add_option("--out", out_path, "output path");

  auto* dist = app.add_subcommand("dist", "distribution over Boolean functions");
  bool exact = false;
  add_model_opts(dist);
  dist->add_option("--k", k, "number of variables")->required();
  dist->add_option("--trials", trials, "Monte Carlo trials");
  dist->add_flag("--exact", exact, "exact enumeration (fixed shapes)");
  dist->add_option("--depth-cap", depth_cap, "spine depth cap");
  dist->add_option("--work-budget", work_budget, "per-trial work budget");

  auto* scaling = app.add_subcommand("scaling", "log p_k vs log k regression");
  std::string fn_text = "1:2";
  std::vector<int> ks{2, 4, 8, 16};
  add_model_opts(scaling);
  scaling->add_option("--fn", fn_text, "target function, \"k:HEX\"");
  scaling->add_option("--ks", ks, "variable counts")->delimiter(',');
  scaling->add_option("--trials", trials, "trials per k");
  scaling->add_option("--depth-cap", depth_cap, "spine depth cap");
  scaling->add_option("--work-budget", work_budget, "per-trial work budget");

  auto* table = app.add_subcommand("table", "complexity table CSV");
  int max_size = 4;
  table->add_option("--k", k, "number of variables")->required();
  table->add_option("--max-size", max_size, "largest tree size searched");
  table->add_option("--out", out_path, "output path");

  auto* checks = app.add_subcommand("checks", "run a verification suite");
  std::string suite = "acceptance";
  std::uint64_t checks_seed = 42;
  checks->add_option("--suite", suite, "suite name (acceptance)");
  checks->add_option("--seed", checks_seed, "master seed");
  checks->add_option("--threads", threads, "worker threads");
  checks->add_option("--out", out_path, "also write a JSON summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (sample->parsed())
      return cmd_sample(margs, k, seed, count, stats, trials, threads, format,
                        out_path);
    if (trim_cmd->parsed()) return cmd_trim(expr, in_path, trim_k, out_path);
    if (dist->parsed())
      return cmd_dist(margs, k, trials, seed, threads, depth_cap, work_budget,
                      exact, out_path);
    if (scaling->parsed())
      return cmd_scaling(margs, fn_text, ks, trials, seed, threads, depth_cap,
                         work_budget, out_path);
    if (table->parsed()) return cmd_table(k, max_size, out_path);
    if (checks->parsed()) return cmd_checks(suite, checks_seed, threads, out_path);
  } catch (const ParseError& e) {
    std::cerr << "parse error at position " << e.pos << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
