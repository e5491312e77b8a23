#include "drstack/solver/lp_writer.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace drstack::solver {
namespace {

std::string var_name(const LinearProgram& p, int j) {
  const std::string& n = p.variable(j).name;
  if (n.empty()) return "v" + std::to_string(j);
  std::string out;
  for (char ch : n) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_') ? ch : '_';
  if (std::isdigit(static_cast<unsigned char>(out.front()))) out = "v" + out;
  return out + "_" + std::to_string(j);
}

void write_terms(std::ostream& os, const LinearProgram& p, const std::vector<Term>& terms) {
  if (terms.empty()) {
    os << " 0 " << var_name(p, 0);
    return;
  }
  for (const auto& t : terms)
    os << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << ' ' << var_name(p, t.var);
}

}  // namespace

void write_lp(std::ostream& os, const LinearProgram& p, const std::vector<QuadTerm>& quadratic) {
  os.precision(17);
  os << (p.sense() == Sense::maximize ? "Maximize\n" : "Minimize\n") << " obj:";
  std::vector<Term> obj;
  const auto c = p.objective_coefficients();
  for (int j = 0; j < p.num_variables(); ++j)
    if (c[j] != 0.0) obj.push_back({j, c[j]});
  if (p.num_variables() > 0) write_terms(os, p, obj);
  if (!quadratic.empty()) {
    os << " + [";
    for (const auto& q : quadratic) {
      // 0.5 x'Qx with the upper triangle stored: diagonal entries appear as
      // q x^2 and off-diagonal ones as 2q x y inside the halved bracket.
      const double coef = q.row == q.col ? q.value : 2.0 * q.value;
      os << (coef < 0 ? " - " : " + ") << std::abs(coef) << ' ' << var_name(p, q.row);
      if (q.row == q.col)
        os << " ^ 2";
      else
        os << " * " << var_name(p, q.col);
    }
    os << " ] / 2";
  }
  os << "\nSubject To\n";
  for (int i = 0; i < p.num_constraints(); ++i) {
    const auto& row = p.constraints()[i];
    os << " c" << i << ':';
    write_terms(os, p, row.terms);
    switch (row.relation) {
      case Relation::less_equal: os << " <= "; break;
      case Relation::equal: os << " = "; break;
      case Relation::greater_equal: os << " >= "; break;
    }
    os << row.rhs << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < p.num_variables(); ++j) {
    const auto& v = p.variable(j);
    if (v.binary) continue;
    const std::string name = var_name(p, j);
    if (!std::isfinite(v.lower) && !std::isfinite(v.upper))
      os << ' ' << name << " free\n";
    else if (v.lower == v.upper)
      os << ' ' << name << " = " << v.lower << '\n';
    else {
      os << ' ';
      if (std::isfinite(v.lower)) os << v.lower; else os << "-inf";
      os << " <= " << name << " <= ";
      if (std::isfinite(v.upper)) os << v.upper; else os << "+inf";
      os << '\n';
    }
  }
  bool any_binary = false;
  for (int j = 0; j < p.num_variables(); ++j) {
    if (!p.variable(j).binary) continue;
    if (!any_binary) os << "Binaries\n";
    any_binary = true;
    os << ' ' << var_name(p, j) << '\n';
  }
  os << "End\n";
}

void write_lp(const std::filesystem::path& path, const LinearProgram& p,
              const std::vector<QuadTerm>& quadratic) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_lp(f, p, quadratic);
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace drstack::solver
