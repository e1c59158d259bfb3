// Command-line front end over the ltlmon C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ltlmon/ltlmon.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFormat = 2;
constexpr int kExitCap = 3;
constexpr int kExitInternal = 4;

struct Failure {
  int code;
  std::string message;
};

int exit_code(ltlmon_status st) {
  switch (st) {
    case LTLMON_OK: return 0;
    case LTLMON_ERR_USAGE: return kExitUsage;
    case LTLMON_ERR_FORMAT: return kExitFormat;
    case LTLMON_ERR_CAP: return kExitCap;
    default: return kExitInternal;
  }
}

void check(ltlmon_status st) {
  if (st != LTLMON_OK) throw Failure{exit_code(st), ltlmon_last_error()};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  ltlmon_string_free(s);
  return out;
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw Failure{kExitUsage, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Failure{kExitUsage, "cannot write '" + path + "'"};
  out << text;
}

template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using Dra = Handle<ltlmon_dra, ltlmon_dra_free>;
using Chain = Handle<ltlmon_chain, ltlmon_chain_free>;
using MonitorHandle = Handle<ltlmon_monitor, ltlmon_monitor_free>;
using OnlineHandle = Handle<ltlmon_online, ltlmon_online_free>;

void load_chain(Chain& c, const std::string& path) { check(ltlmon_chain_parse(read_input(path).c_str(), &c.p)); }

void load_dra(Dra& d, const std::string& formula, const std::string& hoa_path, std::size_t cap) {
  if (formula.empty() == hoa_path.empty()) throw Failure{kExitUsage, "give exactly one of --formula and --dra"};
  if (!formula.empty()) check(ltlmon_dra_from_formula(formula.c_str(), cap, &d.p));
  else check(ltlmon_dra_from_hoa(read_input(hoa_path).c_str(), &d.p));
}

std::string format_confidence(const ltlmon_confidence& c) {
  if (c.infinite) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", c.log_gamma);
  return buf;
}

const char* verdict_text(ltlmon_verdict v) {
  switch (v) {
    case LTLMON_VERDICT_TRUE: return "true";
    case LTLMON_VERDICT_FALSE: return "false";
    default: return "?";
  }
}

template <class T>
std::vector<T> split_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(static_cast<T>(v));
    } catch (const std::exception&) {
      throw Failure{kExitUsage, std::string("invalid ") + what + " entry '" + item + "'"};
    }
  }
  return out;
}

// Streams state names from stdin into a monitor; `row` writes one TSV line per step.
template <class Observe, class Row>
void stream_states(const ltlmon_chain* chain, Observe&& observe, Row&& row) {
  std::string line;
  std::size_t lineno = 0, step = 0;
  while (std::getline(std::cin, line)) {
    ++lineno;
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    std::string name = line.substr(b, e - b + 1);
    uint32_t id = 0;
    if (ltlmon_chain_find_state(chain, name.c_str(), &id) != LTLMON_OK)
      throw Failure{kExitFormat, "input line " + std::to_string(lineno) + ": unknown state '" + name + "'"};
    check(observe(id));
    row(step++);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic LTL runtime monitor"};
  app.require_subcommand(1);
  std::size_t cap = 0;
  app.add_option("--cap", cap, "Automaton state cap (0 = default)");

  // translate
  auto* translate = app.add_subcommand("translate", "Translate an LTL formula to a deterministic Rabin automaton (HOA)");
  std::string tr_formula, tr_name, tr_out;
  translate->add_option("formula", tr_formula, "LTL formula")->required();
  translate->add_option("--name", tr_name, "Automaton name");
  translate->add_option("-o,--out", tr_out, "Output file");

  // classify
  auto* classify = app.add_subcommand("classify", "Classify DRA states as empty, universal or other");
  std::string cl_in;
  classify->add_option("hoa", cl_in, "HOA file (default stdin)");

  // product
  auto* prod = app.add_subcommand("product", "Build the product of a DRA and a chain");
  std::string pr_formula, pr_dra, pr_chain, pr_out;
  prod->add_option("--formula", pr_formula, "LTL formula");
  prod->add_option("--dra", pr_dra, "HOA file");
  prod->add_option("--chain", pr_chain, "Chain file")->required();
  prod->add_option("-o,--out", pr_out, "Output file");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Sample a run of a chain");
  std::string sim_chain;
  uint64_t sim_seed = 1, sim_steps = 100;
  sim->add_option("--chain", sim_chain, "Chain file")->required();
  sim->add_option("--seed", sim_seed, "PRNG seed");
  sim->add_option("--steps", sim_steps, "Number of states to emit");

  // monitor / online-monitor
  std::string mo_chain, mo_formula, mo_dra;
  double mo_pmin = 0;
  auto add_monitor_flags = [&](CLI::App* sub) {
    sub->add_option("--chain", mo_chain, "Chain file supplying state labels")->required();
    sub->add_option("--formula", mo_formula, "LTL formula");
    sub->add_option("--dra", mo_dra, "HOA file");
    sub->add_option("--pmin", mo_pmin, "Lower bound on transition probabilities")->required();
  };
  auto* mon = app.add_subcommand("monitor", "Full-memory monitor over a state stream on stdin");
  add_monitor_flags(mon);
  auto* onl = app.add_subcommand("online-monitor", "Bounded-memory monitor over a state stream on stdin");
  add_monitor_flags(onl);

  // solve
  auto* solve = app.add_subcommand("solve", "Exact acceptance probability");
  std::string so_product, so_chain, so_formula, so_dra;
  solve->add_option("product", so_product, "Product chain file");
  solve->add_option("--chain", so_chain, "Chain file (with --formula or --dra)");
  solve->add_option("--formula", so_formula, "LTL formula");
  solve->add_option("--dra", so_dra, "HOA file");

  // family
  ltlmon_family_params fp;
  ltlmon_family_defaults(&fp);
  std::string fam_p = fp.p, fam_q = fp.q, fam_s = fp.s;
  auto add_family_flags = [&](CLI::App* sub) {
    sub->add_option("--l", fp.l, "Left walk length");
    sub->add_option("--r-len", fp.r_len, "Right walk length");
    sub->add_option("--m", fp.m, "Escape ladder length");
    sub->add_option("--p", fam_p, "Walk bias");
    sub->add_option("--q", fam_q, "Left BSCC bias");
    sub->add_option("--s", fam_s, "Ladder advance probability");
  };
  auto* family = app.add_subcommand("family", "Emit the two-BSCC experiment chain");
  add_family_flags(family);
  family->add_option("--n", fp.n, "Left BSCC ladder length");

  // experiment
  auto* exper = app.add_subcommand("experiment", "Compare fixed-length and confidence-based estimation");
  add_family_flags(exper);
  std::string ex_ns = "10,20,30", ex_quotas, ex_seeds = "1", ex_out;
  std::size_t ex_runs = 100;
  double ex_threshold = 100, ex_pmin = 0;
  exper->add_option("--n", ex_ns, "Comma-separated ladder lengths");
  exper->add_option("--quotas", ex_quotas, "Comma-separated step quotas")->required();
  exper->add_option("--seeds", ex_seeds, "Comma-separated seeds");
  exper->add_option("--runs", ex_runs, "Runs per estimate");
  exper->add_option("--threshold", ex_threshold, "Confidence threshold");
  exper->add_option("--pmin", ex_pmin, "p_min override (default: family minimum)");
  exper->add_option("-o,--out", ex_out, "Output CSV file");

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check", "Compare the automaton pipeline with the lasso oracle");
  std::string oc_formula;
  std::size_t oc_samples = 1000, oc_prefix = 8, oc_cycle = 8;
  uint64_t oc_seed = 1;
  oracle->add_option("--formula", oc_formula, "LTL formula")->required();
  oracle->add_option("--samples", oc_samples, "Random lasso words");
  oracle->add_option("--seed", oc_seed, "PRNG seed");
  oracle->add_option("--max-prefix", oc_prefix, "Maximum prefix length");
  oracle->add_option("--max-cycle", oc_cycle, "Maximum cycle length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*translate) {
      Dra d;
      check(ltlmon_dra_from_formula(tr_formula.c_str(), cap, &d.p));
      char* hoa = nullptr;
      check(ltlmon_dra_to_hoa(d.p, tr_name.empty() ? tr_formula.c_str() : tr_name.c_str(), &hoa));
      write_output(tr_out, take(hoa));
    } else if (*classify) {
      Dra d;
      check(ltlmon_dra_from_hoa(read_input(cl_in).c_str(), &d.p));
      char* table = nullptr;
      check(ltlmon_dra_classify(d.p, &table));
      std::cout << take(table);
    } else if (*prod) {
      Dra d;
      load_dra(d, pr_formula, pr_dra, cap);
      Chain c;
      load_chain(c, pr_chain);
      check(ltlmon_chain_validate(c.p, nullptr, nullptr));
      char* text = nullptr;
      check(ltlmon_product(d.p, c.p, &text));
      write_output(pr_out, take(text));
    } else if (*sim) {
      Chain c;
      load_chain(c, sim_chain);
      check(ltlmon_chain_validate(c.p, nullptr, nullptr));
      auto sink = [](uint32_t s, void* user) {
        auto* chain = static_cast<const ltlmon_chain*>(user);
        std::fputs(ltlmon_chain_state_name(chain, s), stdout);
        std::fputc('\n', stdout);
        return 0;
      };
      check(ltlmon_simulate(c.p, sim_seed, sim_steps, sink, c.p));
    } else if (*mon || *onl) {
      Chain c;
      load_chain(c, mo_chain);
      Dra d;
      load_dra(d, mo_formula, mo_dra, cap);
      if (*mon) {
        MonitorHandle m;
        check(ltlmon_monitor_new(d.p, c.p, mo_pmin, 0, &m.p));
        stream_states(
            c.p, [&](uint32_t s) { return ltlmon_monitor_observe(m.p, s); },
            [&](std::size_t step) {
              ltlmon_confidence conf;
              ltlmon_monitor_confidence(m.p, &conf);
              std::cout << step << '\t' << verdict_text(ltlmon_monitor_verdict(m.p)) << '\t' << conf.m << '\t'
                        << format_confidence(conf) << '\n';
            });
      } else {
        OnlineHandle m;
        check(ltlmon_online_new(d.p, c.p, mo_pmin, &m.p));
        stream_states(
            c.p, [&](uint32_t s) { return ltlmon_online_observe(m.p, s); },
            [&](std::size_t step) {
              ltlmon_confidence conf;
              ltlmon_online_confidence(m.p, &conf);
              std::cout << step << '\t' << verdict_text(ltlmon_online_verdict(m.p)) << '\t' << conf.m << '\t'
                        << format_confidence(conf) << '\t' << ltlmon_online_scc_size(m.p) << '\n';
            });
      }
    } else if (*solve) {
      char* fraction = nullptr;
      double value = 0;
      if (!so_product.empty()) {
        if (!so_chain.empty() || !so_formula.empty() || !so_dra.empty())
          throw Failure{kExitUsage, "give either a product file or --chain with --formula/--dra"};
        Chain pc;
        load_chain(pc, so_product);
        check(ltlmon_chain_validate(pc.p, nullptr, nullptr));
        check(ltlmon_solve_product(pc.p, &fraction, &value));
      } else {
        if (so_chain.empty()) throw Failure{kExitUsage, "solve needs a product file or --chain"};
        Chain c;
        load_chain(c, so_chain);
        check(ltlmon_chain_validate(c.p, nullptr, nullptr));
        Dra d;
        load_dra(d, so_formula, so_dra, cap);
        check(ltlmon_solve(d.p, c.p, &fraction, &value));
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.15g", value);
      std::cout << take(fraction) << '\t' << buf << '\n';
    } else if (*family) {
      fp.p = fam_p.c_str();
      fp.q = fam_q.c_str();
      fp.s = fam_s.c_str();
      Chain c;
      check(ltlmon_chain_family(&fp, &c.p));
      char* text = nullptr;
      check(ltlmon_chain_print(c.p, &text));
      std::cout << take(text);
    } else if (*exper) {
      fp.p = fam_p.c_str();
      fp.q = fam_q.c_str();
      fp.s = fam_s.c_str();
      auto ns = split_list<std::size_t>(ex_ns, "--n");
      auto quotas = split_list<uint64_t>(ex_quotas, "--quotas");
      auto seeds = split_list<uint64_t>(ex_seeds, "--seeds");
      ltlmon_experiment_config cfg{fp,     ns.data(), ns.size(), quotas.data(), quotas.size(), seeds.data(),
                                   seeds.size(), ex_runs, ex_threshold, ex_pmin};
      char* csv = nullptr;
      check(ltlmon_experiment(&cfg, &csv));
      write_output(ex_out, take(csv));
    } else if (*oracle) {
      std::size_t bad = 0;
      char* report = nullptr;
      check(ltlmon_oracle_check(oc_formula.c_str(), oc_samples, oc_seed, oc_prefix, oc_cycle, &bad, &report));
      std::cout << take(report);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
