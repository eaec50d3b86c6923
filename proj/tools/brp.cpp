// brp: run, verify, sweep and compare online repartitioning strategies.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "brp/harness.h"

namespace {

const std::vector<std::string> kSpecKeys = {
    "alg",   "source", "n",      "k",     "l",      "alpha", "delta",         "lambda", "threshold",
    "seed",  "steps",  "oracle", "trace", "out",    "phases", "p_in", "p_out", "paging_length",
};

struct SpecFlags {
  std::map<std::string, std::string> values;
  std::string config;

  void attach(CLI::App &app) {
    for (const auto &key : kSpecKeys) {
      app.add_option("--" + key, values[key], key);
    }
    app.add_option("--config", config, "key = value file; flags override it");
  }

  brp::cli::RunSpec resolve(const CLI::App &app) const {
    brp::cli::RunSpec spec;
    if (!config.empty()) {
      brp::cli::load_config(spec, config);
    }
    for (const auto &key : kSpecKeys) {
      if (app.count("--" + key) > 0) {
        spec.set(key, values.at(key));
      }
    }
    return spec;
  }
};

template <typename T> std::vector<T> parse_list(const std::string &text) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) {
      continue;
    }
    std::istringstream cell(item);
    T value{};
    if (!(cell >> value) || !cell.eof()) {
      throw brp::Error(brp::Errc::InvalidSpec, "bad list item '" + item + "'");
    }
    out.push_back(value);
  }
  return out;
}

void emit(const std::string &text, const std::string &path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) {
    throw brp::Error(brp::Errc::InvalidSpec, "cannot write " + path);
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Online balanced repartitioning simulator"};
  app.require_subcommand(1);

  SpecFlags run_flags;
  SpecFlags verify_flags;
  SpecFlags sweep_flags;
  SpecFlags compare_flags;
  std::string alphas, ks, ls, seeds, algs = "greedy,crep,threshold,static";
  unsigned threads = 0;

  CLI::App *run = app.add_subcommand("run", "run one spec and print its JSON report");
  run_flags.attach(*run);
  CLI::App *verify = app.add_subcommand("verify", "run with per-step invariant checks");
  verify_flags.attach(*verify);
  CLI::App *sweep = app.add_subcommand("sweep", "grid over alpha, k, l and seeds; CSV output");
  sweep_flags.attach(*sweep);
  sweep->add_option("--alphas", alphas, "comma-separated alpha values");
  sweep->add_option("--ks", ks, "comma-separated k values");
  sweep->add_option("--ls", ls, "comma-separated l values");
  sweep->add_option("--seeds", seeds, "comma-separated seeds");
  sweep->add_option("--threads", threads, "worker threads (0: hardware)");
  CLI::App *compare = app.add_subcommand("compare", "several algorithms on one source; CSV output");
  compare_flags.attach(*compare);
  compare->add_option("--algs", algs, "comma-separated algorithm names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto result = brp::cli::cmd_run(run_flags.resolve(*run));
      std::cout << result.to_json() << '\n';
      return result.invariants.violations == 0 ? 0 : 1;
    }
    if (verify->parsed()) {
      const auto result = brp::cli::cmd_verify(verify_flags.resolve(*verify));
      if (result.invariants.violations == 0) {
        std::cout << "PASS " << result.spec.alg << " invariants over " << result.transcript.steps.size()
                  << " steps\n";
        return 0;
      }
      std::cout << "FAIL at step " << result.invariants.first_bad_step << ": " << result.invariants.first
                << '\n'
                << result.invariants.dump;
      return 1;
    }
    if (sweep->parsed()) {
      const brp::cli::RunSpec base = sweep_flags.resolve(*sweep);
      base.validate();
      brp::cli::SweepGrid grid{
          parse_list<brp::Cost>(alphas), parse_list<int>(ks), parse_list<int>(ls),
          parse_list<std::uint64_t>(seeds)};
      emit(brp::cli::cmd_sweep(base, grid, threads), base.out);
      return 0;
    }
    const brp::cli::RunSpec base = compare_flags.resolve(*compare);
    emit(brp::cli::cmd_compare(base, parse_list<std::string>(algs)), base.out);
    return 0;
  } catch (const brp::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
