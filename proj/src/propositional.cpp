#include "doctrina/propositional.hpp"

#include <algorithm>
#include <cctype>

#include "doctrina/error.hpp"
#include "doctrina/reader.hpp"

namespace doctrina {

namespace {

// Recursive descent over truth tables; every node evaluates to a bitmask.
class FormulaParser {
 public:
  FormulaParser(std::string_view text, const std::vector<std::string>& atoms)
      : s_(text), atoms_(atoms), rows_(1u << atoms.size()), all_(rows_ >= 64 ? ~Elem{0} : (Elem{1} << rows_) - 1) {}

  Elem parse() {
    const Elem v = iff();
    skip_ws();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(Errc::SyntaxError, "column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }

  Elem iff() {
    Elem v = imp();
    while (eat("<->")) v = ~(v ^ imp()) & all_;
    return v;
  }

  Elem imp() {
    const Elem v = disj();
    if (eat("->")) return (~v | imp()) & all_;
    return v;
  }

  Elem disj() {
    Elem v = conj();
    while (eat("|")) v |= conj();
    return v;
  }

  Elem conj() {
    Elem v = unary();
    while (eat("&")) v &= unary();
    return v;
  }

  Elem unary() {
    if (eat("~") || eat("!")) return ~unary() & all_;
    if (eat("(")) {
      const Elem v = iff();
      if (!eat(")")) error("expected ')'");
      return v;
    }
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) error(pos_ == s_.size() ? "unexpected end of formula" : "expected a formula");
    const std::string name(s_.substr(start, pos_ - start));
    if (name == "T" || name == "true") return all_;
    if (name == "F" || name == "false") return 0;
    const auto it = std::find(atoms_.begin(), atoms_.end(), name);
    if (it == atoms_.end()) fail(Errc::UnresolvedReference, "unknown atom '" + name + "'");
    const auto j = static_cast<unsigned>(it - atoms_.begin());
    Elem v = 0;
    for (unsigned i = 0; i < rows_; ++i)
      if ((i >> j) & 1) v |= Elem{1} << i;
    return v;
  }

  std::string_view s_;
  const std::vector<std::string>& atoms_;
  unsigned rows_;
  Elem all_;
  std::size_t pos_ = 0;
};

std::shared_ptr<const TableCategory> terminal_category() {
  static const auto c = [] {
    const std::vector<std::pair<std::string, std::string>> refl{{"t", "t"}};
    return semilattice_to_category(validate_poset({"t"}, refl));
  }();
  return c;
}

// p&~q style names for the assignments
SubsetLattice::Names assignment_names(const std::vector<std::string>& atoms) {
  auto names = std::make_shared<std::vector<std::string>>();
  const unsigned rows = 1u << atoms.size();
  for (unsigned i = 0; i < rows; ++i) {
    std::string n;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (!n.empty()) n += '&';
      n += ((i >> j) & 1) ? atoms[j] : "~" + atoms[j];
    }
    names->push_back(n.empty() ? "*" : n);
  }
  return names;
}

}  // namespace

Elem truth_table(std::string_view formula, const std::vector<std::string>& atoms) {
  if (atoms.size() > 6) fail(Errc::AtomCapExceeded, std::to_string(atoms.size()) + " atoms, at most 6 fit a fiber");
  return FormulaParser(formula, atoms).parse();
}

LtTheory propositional_lt(std::vector<std::string> atoms, std::vector<std::string> axioms, unsigned atom_cap) {
  if (atoms.size() > std::min(atom_cap, 6u))
    fail(Errc::AtomCapExceeded,
         std::to_string(atoms.size()) + " atoms, cap " + std::to_string(std::min(atom_cap, 6u)));
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (std::find(atoms.begin(), atoms.begin() + static_cast<std::ptrdiff_t>(i), atoms[i]) !=
        atoms.begin() + static_cast<std::ptrdiff_t>(i))
      fail(Errc::DuplicateName, "atom '" + atoms[i] + "' listed twice");

  LtTheory th;
  th.atoms = std::move(atoms);
  th.axioms = std::move(axioms);
  const unsigned rows = 1u << th.atoms.size();
  th.models = rows >= 64 ? ~Elem{0} : (Elem{1} << rows) - 1;
  for (const auto& ax : th.axioms) th.models &= truth_table(ax, th.atoms);
  auto fiber = std::make_shared<SubsetLattice>(rows, th.models, assignment_names(th.atoms));
  th.doctrine = table_doctrine("LT", terminal_category(), {fiber}, {});
  return th;
}

LtAxiomIso lt_add_axiom_iso(const std::vector<std::string>& atoms, const std::vector<std::string>& axioms,
                            const std::string& phi, const Limits& limits, Report& report) {
  const LtTheory lt = propositional_lt(atoms, axioms);
  auto more = axioms;
  more.push_back(phi);
  const LtTheory direct = propositional_lt(atoms, more);

  Report sub;
  const Extension ext = add_axiom(lt.doctrine, lt.class_of(phi), limits, sub);
  report.merge(sub, "lt: ");

  const Category& C = *lt.doctrine->base();
  const Obj t = C.terminal();
  const auto fe = ext.doctrine()->fiber(t);
  const auto fd = direct.doctrine->fiber(t);
  const Elem top = ext.top(t);
  const auto fl = lt.doctrine->fiber(C.product(t, t));

  // alpha <= phi in LT_T read as a formula modulo T + phi
  const MonotoneMap there(fe, fd, [m = direct.models](Elem a) { return a & m; });
  // beta modulo T + phi read modulo T, then /\ phi
  const MonotoneMap back(fd, fe, [fl, top](Elem b) { return *fl->meet(b, top); });

  auto bad = [](const std::string& w) { fail(Errc::IsoMismatch, w); };
  for (Elem a : fe->elements()) {
    if (!fd->contains(there(a))) bad("e'(" + fe->label(a) + ") is not a class modulo T + phi");
    if (back(there(a)) != a) bad("beta /\\ phi does not undo e' at " + fe->label(a));
    for (Elem b : fe->elements())
      if (fe->leq(a, b) != fd->leq(there(a), there(b))) bad("e' is not an order embedding at " + fe->label(a));
  }
  for (Elem b : fd->elements()) {
    if (!fe->contains(back(b))) bad(fd->label(b) + " /\\ phi leaves the extended fiber");
    if (there(back(b)) != b) bad("e' does not undo beta /\\ phi at " + fd->label(b));
  }
  // the base has one object; naturality is over the arrows t ~> t
  const auto loops = ext.bundle.category->hom(t, t, limits.hom_cap);
  for (const Arrow& g : *loops) {
    const auto re = ext.doctrine()->reindex(g);
    const auto rd = direct.doctrine->reindex(C.identity(t));
    for (Elem a : fe->elements())
      if (there(re(a)) != rd(there(a))) bad("e' is not natural along " + ext.bundle.category->arrow_label(g));
  }
  report.pass("lt: (LT_T)_phi and LT_(T + phi) are isomorphic",
              std::to_string(fe->size()) + " classes on each side");
  report.fact("lt.extension_size", std::to_string(fe->size()));
  report.fact("lt.direct_size", std::to_string(fd->size()));
  return {fe->size(), fd->size()};
}

}  // namespace doctrina
