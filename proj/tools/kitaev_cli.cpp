// kitaev: command-line front end for order finding, factoring, discrete
// logarithms, eigenvalue measurement, the Abelian QFT and circuit files.
//
// Exit codes: 0 ok, 1 soft failure (retry with another seed), 2 hard error
// (bad arguments, parse errors, qubit budget).

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "kitaev/abelian_qft.hpp"
#include "kitaev/asp.hpp"
#include "kitaev/boolean_circuit.hpp"
#include "kitaev/errors.hpp"
#include "kitaev/phase_estimation.hpp"
#include "kitaev/reversible.hpp"
#include "kitaev/state_vector.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace kitaev;

struct Config {
  std::uint64_t seed = 20240601;
  double eps = 1e-6;
  int qubit_cap = kMaxQubits;
  bool json_out = false;
  int trials = 0;  // 0: the command's own default
};

struct Report {
  json inputs = json::object();
  json result = json::object();
  std::uint64_t gate_calls = 0;
  std::uint64_t apply_calls = 0;
  bool all_passed = true;  // selftest only
};

int trials_or(const Config& cfg, int fallback) { return cfg.trials > 0 ? cfg.trials : fallback; }

void check_asp_budget(std::uint64_t modulus, const Config& cfg) {
  // one ancilla plus the n-bit orbit register
  const int need = std::max(1, bit_length(modulus - 1)) + 1;
  if (need > cfg.qubit_cap) {
    throw QubitBudgetExceeded("needs " + std::to_string(need) + " qubits, cap is " + std::to_string(cfg.qubit_cap));
  }
}

void cmd_order(std::uint64_t g, std::uint64_t modulus, const Config& cfg, Report& rep) {
  rep.inputs = {{"g", g}, {"N", modulus}};
  check_asp_budget(modulus, cfg);
  Rng rng(cfg.seed, "cli-order");
  RunCounters rc;
  const std::uint64_t r = find_order(g, modulus, rng, trials_or(cfg, 8), &rc);
  rep.result = {{"order", r}, {"attempts", rc.attempts}};
  rep.gate_calls = rc.gate_calls;
  rep.apply_calls = rc.apply_calls;
}

void cmd_factor(std::uint64_t modulus, const Config& cfg, Report& rep) {
  rep.inputs = {{"N", modulus}};
  check_asp_budget(modulus, cfg);
  Rng rng(cfg.seed, "cli-factor");
  RunCounters rc;
  const Factorization f = factor(modulus, rng, trials_or(cfg, 20), &rc);
  rep.result = {{"factors", {f.p, f.q}}, {"bases_tried", f.bases_tried}};
  rep.gate_calls = rc.gate_calls;
  rep.apply_calls = rc.apply_calls;
}

void cmd_dlog(std::uint64_t q, std::uint64_t zeta, std::uint64_t g, const Config& cfg, Report& rep) {
  rep.inputs = {{"q", q}, {"zeta", zeta}, {"g", g}};
  check_asp_budget(q, cfg);
  Rng rng(cfg.seed, "cli-dlog");
  RunCounters rc;
  const std::uint64_t m = discrete_log(q, zeta, g, rng, trials_or(cfg, 8), &rc);
  rep.result = {{"log", m}, {"attempts", rc.attempts}};
  rep.gate_calls = rc.gate_calls;
  rep.apply_calls = rc.apply_calls;
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw InvalidArgument("empty entry in list '" + s + "'");
    std::size_t used = 0;
    const unsigned long long v = std::stoull(item, &used);
    if (used != item.size()) throw InvalidArgument("not an integer: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

// |ψ_k> = r^{-1/2} Σ_j e^{-2πijk/r} |σ^j x0>, eigenvalue e^{2πik/r}
void cmd_phase(const std::string& perm_text, std::uint64_t start, std::uint64_t k, const Config& cfg,
               Report& rep) {
  const std::vector<std::uint64_t> map = parse_list(perm_text);
  if (!std::has_single_bit(map.size()) || map.size() < 2) {
    throw InvalidArgument("permutation length must be a power of two >= 2");
  }
  const int bits = std::countr_zero(map.size());
  rep.inputs = {{"perm", map}, {"start", start}, {"k", k}};
  if (bits + 1 > cfg.qubit_cap) throw QubitBudgetExceeded("phase: register exceeds the qubit cap");
  const PermutationTable table(bits, map);
  std::vector<bool> seen(map.size(), false);
  for (std::uint64_t y : map) {
    if (y >= map.size() || seen[y]) throw InvalidArgument("phase: not a permutation");
    seen[y] = true;
  }
  if (start >= map.size()) throw InvalidArgument("phase: start outside the domain");
  std::vector<std::uint64_t> cycle{start};
  while (map[cycle.back()] != start) cycle.push_back(map[cycle.back()]);
  const std::uint64_t r = cycle.size();
  const Gate u = Gate::permutation(table);
  const auto prepare = [&] {
    std::vector<qlinalg::Complex> amps(map.size(), 0.0);
    for (std::uint64_t j = 0; j < r; ++j) {
      const double ang = -2.0 * M_PI * static_cast<double>((j * (k % r)) % r) / static_cast<double>(r);
      amps[cycle[j]] = std::polar(1.0 / std::sqrt(static_cast<double>(r)), ang);
    }
    return StateVector(bits, std::move(amps), cfg.qubit_cap);
  };
  const RationalPhase expected = RationalPhase::make(static_cast<std::int64_t>(k % r), static_cast<std::int64_t>(r));
  Rng rng(cfg.seed, "cli-phase");
  PhaseStats stats;
  json outcomes = json::array();
  int correct = 0;
  const int runs = trials_or(cfg, 1);
  for (int t = 0; t < runs; ++t) {
    const RationalPhase got = measure_eigenvalue_exact(u, prepare, cfg.eps, rng, &stats);
    outcomes.push_back(std::to_string(got.p) + "/" + std::to_string(got.q));
    correct += got == expected;
  }
  rep.result = {{"cycle_length", r},
                {"expected", std::to_string(expected.p) + "/" + std::to_string(expected.q)},
                {"measured", outcomes},
                {"correct", correct},
                {"shots", stats.shots}};
  rep.gate_calls = stats.gate_calls;
}

std::vector<std::uint64_t> mixed_radix(std::uint64_t index, const std::vector<CyclicGroupSpec>& specs) {
  std::vector<std::uint64_t> a(specs.size());
  for (std::size_t i = specs.size(); i-- > 0;) {
    a[i] = index % specs[i].q;
    index /= specs[i].q;
  }
  return a;
}

void cmd_qft(const std::vector<std::uint64_t>& qs, const std::vector<std::uint64_t>& a_in, const Config& cfg,
             Report& rep) {
  rep.inputs = {{"q", qs}, {"eps", cfg.eps}};
  if (!a_in.empty()) rep.inputs["a"] = a_in;
  std::vector<CyclicGroupSpec> specs;
  std::uint64_t order = 1;
  for (std::uint64_t q : qs) {
    specs.push_back(CyclicGroupSpec::make(q));
    order *= q;
  }
  const QftProgram prog = qft_abelian(specs, cfg.eps);
  if (prog.memory() > cfg.qubit_cap) {
    throw QubitBudgetExceeded("qft needs " + std::to_string(prog.memory()) + " qubits, cap is " +
                              std::to_string(cfg.qubit_cap));
  }
  std::vector<std::vector<std::uint64_t>> columns;
  if (a_in.empty()) {
    for (std::uint64_t i = 0; i < order; ++i) columns.push_back(mixed_radix(i, specs));
  } else if (a_in.size() == specs.size()) {
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (a_in[i] >= specs[i].q) throw InvalidArgument("qft: a component out of range");
    }
    columns.push_back(a_in);
  } else if (a_in.size() == 1) {
    if (a_in[0] >= order) throw InvalidArgument("qft: a out of range");
    columns.push_back(mixed_radix(a_in[0], specs));
  } else {
    throw InvalidArgument("qft: --a takes one index or one value per factor");
  }
  json cols = json::array();
  double worst = 1.0;
  for (const auto& a : columns) {
    const QftColumn c = qft_column(prog, a, cfg.qubit_cap);
    worst = std::min(worst, c.fidelity);
    cols.push_back({{"a", a}, {"fidelity", c.fidelity}, {"residual", c.residual}});
  }
  json shots = json::array();
  for (const auto& f : prog.factors) shots.push_back(f.shots);
  rep.result = {{"qubits", prog.memory()},
                {"operations", prog.seq.length()},
                {"shots_per_level", shots},
                {"min_fidelity", worst},
                {"columns", cols}};
}

// classical sequence, so it runs on bit vectors and the qubit cap does not apply
void cmd_circuit(const std::string& path, const std::string& input, Report& rep) {
  rep.inputs = {{"file", path}};
  const BooleanCircuit c = load_circuit(path);
  const ReversibleProgram ft = make_f_tau(c);
  const int n = c.num_inputs();
  const int m = static_cast<int>(c.outputs().size());
  const Register u = make_register(0, n);
  const Register v = make_register(n, m);
  std::vector<std::uint64_t> xs;
  if (!input.empty()) {
    if (static_cast<int>(input.size()) != n) throw InvalidArgument("input must have " + std::to_string(n) + " bits");
    for (char ch : input) {
      if (ch != '0' && ch != '1') throw InvalidArgument("input must be a bitstring");
    }
    xs.push_back(parse_bitstring(input));
  } else {
    if (n > 10) throw InvalidArgument("give --input for circuits with more than 10 inputs");
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) xs.push_back(x);
  }
  json table = json::array();
  bool agree = true;
  for (std::uint64_t x : xs) {
    std::vector<int> bits(static_cast<std::size_t>(ft.seq.memory_size), 0);
    write_bits(bits, u, x);
    bits = run_classical(ft.seq, bits);
    const std::uint64_t y = read_bits(bits, v);
    const bool clean = read_bits(bits, ft.aux) == 0 && read_bits(bits, u) == x;
    agree &= clean && y == c.evaluate_int(x);
    table.push_back({{"input", bitstring(x, n)}, {"output", bitstring(y, m)}});
  }
  rep.result = {{"inputs", n},
                {"outputs", m},
                {"gates", c.num_gates()},
                {"f_tau_length", ft.seq.length()},
                {"f_tau_qubits", ft.seq.memory_size},
                {"matches_direct_evaluation", agree},
                {"table", table}};
  if (!agree) throw Error("compiled circuit disagrees with direct evaluation");
}

// Files named bad_* must be rejected; every other circuit must compile to an
// F_τ that matches direct evaluation on all inputs.
json check_corpus(const std::string& dir, const Config& cfg, bool& ok) {
  json rows = json::array();
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".circ") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const bool expect_bad = f.filename().string().rfind("bad_", 0) == 0;
    bool pass;
    std::string detail;
    try {
      Report sub;
      cmd_circuit(f.string(), "", sub);
      pass = !expect_bad;
      detail = expect_bad ? "accepted" : "ok";
    } catch (const Error& e) {
      pass = expect_bad;
      detail = e.what();
    }
    ok &= pass;
    if (!cfg.json_out) {
      std::cout << (pass ? "PASS" : "FAIL") << "  corpus " << f.filename().string() << "  " << detail << "\n";
    }
    rows.push_back({{"file", f.filename().string()}, {"pass", pass}, {"detail", detail}});
  }
  return rows;
}

void cmd_selftest(const std::vector<int>& only, const std::string& corpus, const Config& cfg, Report& rep) {
  rep.inputs = {{"criteria", only}};
  if (!corpus.empty()) rep.inputs["corpus"] = corpus;
  json rows = json::array();
  for (const auto& r : acceptance::run(cfg.seed, only)) {
    if (!cfg.json_out) std::cout << acceptance::format_line(r) << "\n";
    rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    rep.all_passed &= r.pass;
  }
  rep.result = {{"criteria", rows}};
  if (!corpus.empty()) rep.result["corpus"] = check_corpus(corpus, cfg, rep.all_passed);
  rep.result["all_passed"] = rep.all_passed;
}

void print_text(const std::string& command, const Report& rep, const std::string& status,
                const std::string& message) {
  if (command == "selftest" && status == "ok") return;
  std::cout << command << ": " << status << "\n";
  if (!message.empty()) std::cout << "  " << message << "\n";
  for (const auto& [key, value] : rep.result.items()) {
    std::cout << "  " << key << " = " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
  if (rep.gate_calls || rep.apply_calls) {
    std::cout << "  blackbox calls: gate " << rep.gate_calls << ", apply " << rep.apply_calls << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue-measurement algorithms on a state-vector simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--eps", cfg.eps, "Error probability in (0, 1/2) for phase and qft");
  app.add_option("--qubit-cap", cfg.qubit_cap, "Maximum simulated qubits (<= 26)");
  app.add_flag("--json", cfg.json_out, "Print one JSON document");
  app.add_option("--trials", cfg.trials, "Attempts (order, dlog), bases (factor) or repeats (phase)");

  std::uint64_t a1 = 0, a2 = 0, a3 = 0;
  auto* order = app.add_subcommand("order", "Order of g modulo N");
  order->add_option("g", a1)->required();
  order->add_option("N", a2)->required();
  auto* fac = app.add_subcommand("factor", "Split an odd composite N");
  fac->add_option("N", a1)->required();
  auto* dlog = app.add_subcommand("dlog", "m with zeta^m = g mod prime q");
  dlog->add_option("q", a1)->required();
  dlog->add_option("zeta", a2)->required();
  dlog->add_option("g", a3)->required();

  std::string perm;
  std::uint64_t start = 0, k = 1;
  auto* phase = app.add_subcommand("phase", "Measure an eigenvalue of a permutation");
  phase->add_option("--perm", perm, "Images of 0..2^n-1, comma separated")->required();
  phase->add_option("--start", start, "A point of the cycle");
  phase->add_option("--k", k, "Eigenvector index on that cycle");

  std::vector<std::uint64_t> qs, a_vals;
  auto* qftc = app.add_subcommand("qft", "Fourier transform on Z_q1 x ... x Z_qk");
  qftc->add_option("q", qs, "Cyclic factors")->required();
  qftc->add_option("--a", a_vals, "Column: one mixed-radix index or one value per factor");

  std::string path, input;
  auto* circ = app.add_subcommand("circuit", "Evaluate a text circuit through its compiled F_tau");
  circ->add_option("file", path)->required();
  circ->add_option("--input", input, "Input bitstring, msb first");

  std::vector<int> only;
  std::string corpus;
  auto* self = app.add_subcommand("selftest", "Run the acceptance criteria");
  self->add_option("ids", only, "Criterion ids (all when empty)");
  self->add_option("--corpus", corpus, "Directory of .circ files to check as well");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Report rep;
  std::string status = "ok", message;
  int code = 0;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (!(cfg.eps > 0.0 && cfg.eps < 0.5)) throw InvalidArgument("--eps must lie in (0, 1/2)");
    if (cfg.qubit_cap < 1 || cfg.qubit_cap > kMaxQubits) throw InvalidArgument("--qubit-cap must be in [1, 26]");
    if (cfg.trials < 0) throw InvalidArgument("--trials must be positive");
    if (command == "order") cmd_order(a1, a2, cfg, rep);
    if (command == "factor") cmd_factor(a1, cfg, rep);
    if (command == "dlog") cmd_dlog(a1, a2, a3, cfg, rep);
    if (command == "phase") cmd_phase(perm, start, k, cfg, rep);
    if (command == "qft") cmd_qft(qs, a_vals, cfg, rep);
    if (command == "circuit") cmd_circuit(path, input, rep);
    if (command == "selftest") cmd_selftest(only, corpus, cfg, rep);
    if (!rep.all_passed) {
      status = "failed";
      code = 1;
    }
  } catch (const SoftFailure& e) {
    status = "soft_failure";
    message = e.what();
    code = 1;
  } catch (const std::exception& e) {
    status = "error";
    message = e.what();
    code = 2;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (cfg.json_out) {
    json doc;
    doc["command"] = command;
    doc["inputs"] = rep.inputs;
    doc["seed"] = cfg.seed;
    doc["status"] = status;
    if (!message.empty()) doc["message"] = message;
    doc["result"] = rep.result;
    doc["blackbox_calls"] = {{"gate", rep.gate_calls}, {"apply", rep.apply_calls}};
    doc["wall_time"] = wall;
    std::cout << doc.dump(2) << "\n";
  } else {
    print_text(command, rep, status, message);
  }
  return code;
}
