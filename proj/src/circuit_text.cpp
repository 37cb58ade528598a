#include <fstream>
#include <optional>
#include <sstream>

#include "kitaev/boolean_circuit.hpp"
#include "kitaev/errors.hpp"

namespace kitaev {

namespace {

int parse_int(const std::string& tok, int line) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("line " + std::to_string(line) + ": expected an integer, got '" + tok + "'");
  }
}

}  // namespace

BooleanCircuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::optional<BooleanCircuit> c;
  bool have_outputs = false;
  while (std::getline(in, raw)) {
    ++line;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "INPUTS") {
      if (c) throw InvalidArgument("line " + std::to_string(line) + ": INPUTS given twice");
      if (tok.size() != 2) throw InvalidArgument("line " + std::to_string(line) + ": INPUTS takes one count");
      c.emplace(parse_int(tok[1], line));
      continue;
    }
    if (!c) throw InvalidArgument("line " + std::to_string(line) + ": INPUTS must come first");
    if (have_outputs) throw InvalidArgument("line " + std::to_string(line) + ": nothing may follow OUTPUTS");
    if (kw == "NOT" || kw == "AND") {
      const std::size_t nargs = kw == "NOT" ? 1 : 2;
      if (tok.size() != 1 + nargs && tok.size() != 3 + nargs) {
        throw InvalidArgument("line " + std::to_string(line) + ": malformed " + kw);
      }
      const int expected = c->num_wires();
      if (tok.size() == 3 + nargs) {
        if (tok[1 + nargs] != "->") throw InvalidArgument("line " + std::to_string(line) + ": expected '->'");
        const int dest = parse_int(tok[2 + nargs], line);
        if (dest != expected) {
          throw WiringViolation("line " + std::to_string(line) + ": destination " + std::to_string(dest) +
                                " is not the next wire " + std::to_string(expected));
        }
      }
      const int a = parse_int(tok[1], line);
      if (kw == "NOT") {
        c->add_not(a);
      } else {
        c->add_and(a, parse_int(tok[2], line));
      }
      continue;
    }
    if (kw == "OUTPUTS") {
      std::vector<int> taps;
      for (std::size_t i = 1; i < tok.size(); ++i) taps.push_back(parse_int(tok[i], line));
      c->set_outputs(std::move(taps));
      have_outputs = true;
      continue;
    }
    throw InvalidArgument("line " + std::to_string(line) + ": unknown keyword '" + kw + "'");
  }
  if (!c) throw InvalidArgument("circuit text has no INPUTS line");
  return *c;
}

BooleanCircuit load_circuit(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open circuit file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_circuit(ss.str());
}

std::string format_circuit(const BooleanCircuit& c) {
  std::ostringstream out;
  out << "INPUTS " << c.num_inputs() << "\n";
  int w = c.num_inputs();
  for (const auto& nd : c.nodes()) {
    if (nd.op == BooleanCircuit::Op::Not) {
      out << "NOT " << nd.a << " -> " << w << "\n";
    } else {
      out << "AND " << nd.a << " " << nd.b << " -> " << w << "\n";
    }
    ++w;
  }
  out << "OUTPUTS";
  for (int t : c.outputs()) out << " " << t;
  out << "\n";
  return out.str();
}

}  // namespace kitaev
