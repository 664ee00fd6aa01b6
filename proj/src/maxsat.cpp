#include "opmax/maxsat.hpp"

#include <sstream>

namespace opmax {

std::string write_wcnf(const MaxSatInstance& inst, bool legacy) {
  std::ostringstream os;
  if (legacy) {
    BigInt top = 1;
    for (const auto& [cl, w] : inst.soft) top += w;
    os << "p wcnf " << inst.variable_count << ' '
       << inst.hard.size() + inst.soft.size() << ' ' << top.str() << '\n';
    for (const auto& cl : inst.hard) {
      os << top.str();
      for (int l : cl) os << ' ' << l;
      os << " 0\n";
    }
    for (const auto& [cl, w] : inst.soft) {
      os << w.str();
      for (int l : cl) os << ' ' << l;
      os << " 0\n";
    }
    return os.str();
  }
  os << "c opmax wcnf: " << inst.variable_count << " vars, " << inst.hard.size()
     << " hard, " << inst.soft.size() << " soft\n";
  for (const auto& cl : inst.hard) {
    os << 'h';
    for (int l : cl) os << ' ' << l;
    os << " 0\n";
  }
  for (const auto& [cl, w] : inst.soft) {
    os << w.str();
    for (int l : cl) os << ' ' << l;
    os << " 0\n";
  }
  return os.str();
}

MaxSatInstance parse_wcnf(const std::string& text) {
  MaxSatInstance inst;
  std::istringstream is(text);
  std::string line;
  bool legacy = false;
  BigInt top = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      long long nv = 0, nc = 0;
      ls >> p >> fmt >> nv >> nc;
      std::string t;
      if (ls >> t) top = BigInt(t);
      legacy = true;
      inst.variable_count = (int)nv;
      continue;
    }
    Clause cl;
    bool hard = false;
    BigInt weight = 0;
    std::string head;
    ls >> head;
    if (head == "h") {
      hard = true;
    } else {
      weight = BigInt(head);
      if (legacy && weight == top) hard = true;
    }
    long long lit;
    while (ls >> lit && lit != 0) {
      cl.push_back((int)lit);
      int v = (int)(lit > 0 ? lit : -lit);
      if (v > inst.variable_count) inst.variable_count = v;
    }
    if (hard) inst.hard.push_back(std::move(cl));
    else inst.soft.emplace_back(std::move(cl), weight);
  }
  return inst;
}

SolverResult parse_solver_output(const std::string& text, int variable_count) {
  SolverResult res;
  std::istringstream is(text);
  std::string line;
  std::string vline_payload;
  bool have_status = false;
  bool have_cost = false;
  while (std::getline(is, line)) {
    if (line.size() < 1) continue;
    if (line[0] == 's' && (line.size() == 1 || line[1] == ' ')) {
      have_status = true;
      if (line.find("OPTIMUM FOUND") != std::string::npos)
        res.status = SolveStatus::Optimum;
      else if (line.find("UNSATISFIABLE") != std::string::npos)
        res.status = SolveStatus::Unsatisfiable;
      else if (line.find("SATISFIABLE") != std::string::npos)
        res.status = SolveStatus::Satisfiable;
      else
        res.status = SolveStatus::Unknown;
    } else if (line[0] == 'o' && (line.size() == 1 || line[1] == ' ')) {
      std::istringstream ls(line.substr(1));
      std::string c;
      if (ls >> c) {
        res.cost = BigInt(c);
        have_cost = true;
      }
    } else if (line[0] == 'v' && (line.size() == 1 || line[1] == ' ')) {
      vline_payload += line.substr(1);
      vline_payload += ' ';
    }
  }
  if (!vline_payload.empty()) {
    res.assignment.assign(variable_count + 1, -1);
    // try signed-literal form first; a 0/1 string has no '-' and its tokens
    // are runs of 0/1 longer than typical literals
    std::istringstream vs(vline_payload);
    std::vector<std::string> toks;
    std::string t;
    while (vs >> t) toks.push_back(t);
    bool binary_form = true;
    size_t total_bits = 0;
    for (const auto& tok : toks) {
      for (char ch : tok)
        if (ch != '0' && ch != '1') binary_form = false;
      total_bits += tok.size();
    }
    if (binary_form && toks.size() >= 1 && total_bits >= (size_t)variable_count &&
        (toks.size() == 1 || total_bits != toks.size())) {
      int v = 1;
      for (const auto& tok : toks)
        for (char ch : tok) {
          if (v <= variable_count) res.assignment[v++] = ch == '1' ? 1 : 0;
        }
    } else {
      for (const auto& tok : toks) {
        long long lit = std::stoll(tok);
        if (lit == 0) continue;
        long long v = lit > 0 ? lit : -lit;
        if (v <= variable_count) res.assignment[v] = lit > 0 ? 1 : 0;
      }
    }
  }
  if (!have_status && have_cost) res.status = SolveStatus::Satisfiable;
  // a cost without a model is not trustworthy
  if (res.status != SolveStatus::Unsatisfiable && res.assignment.empty())
    res.status = SolveStatus::Unknown;
  return res;
}

}  // namespace opmax
