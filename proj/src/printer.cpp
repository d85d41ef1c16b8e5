#include <sstream>
#include <string>

#include "gcdk/frontend.hpp"

namespace gcdk::frontend {
namespace {

std::string term_str(const Signature& sig, Term t) {
  if (t.is_const()) return sig.consts[t.cst];
  return t.var == VarX ? "x" : "y";
}

// Precedence: atoms 6, ~ 5, & 4, | 3, -> 2, <-> 1.
// & and | associate left, -> and <-> associate right.
void print_rec(std::ostringstream& out, const Signature& sig, const F& f,
               int ctx) {
  auto paren = [&](int prec, auto&& body) {
    if (prec < ctx) out << "(";
    body();
    if (prec < ctx) out << ")";
  };
  switch (f->k) {
    case FK::True: out << "true"; return;
    case FK::False: out << "false"; return;
    case FK::Unary:
      out << sig.un[f->pred] << "(" << term_str(sig, f->a) << ")";
      return;
    case FK::Binary:
      out << sig.bin[f->pred] << "(" << term_str(sig, f->a) << ", "
          << term_str(sig, f->b) << ")";
      return;
    case FK::Eq:
      out << term_str(sig, f->a) << " = " << term_str(sig, f->b);
      return;
    case FK::Not:
      if (f->l->k == FK::Eq) {
        out << term_str(sig, f->l->a) << " != " << term_str(sig, f->l->b);
        return;
      }
      paren(5, [&] {
        out << "~";
        print_rec(out, sig, f->l, 5);
      });
      return;
    case FK::And:
      paren(4, [&] {
        print_rec(out, sig, f->l, 4);
        out << " & ";
        print_rec(out, sig, f->r, 5);
      });
      return;
    case FK::Or:
      paren(3, [&] {
        print_rec(out, sig, f->l, 3);
        out << " | ";
        print_rec(out, sig, f->r, 4);
      });
      return;
    case FK::Imp:
      paren(2, [&] {
        print_rec(out, sig, f->l, 3);
        out << " -> ";
        print_rec(out, sig, f->r, 2);
      });
      return;
    case FK::Iff:
      paren(1, [&] {
        print_rec(out, sig, f->l, 2);
        out << " <-> ";
        print_rec(out, sig, f->r, 1);
      });
      return;
    case FK::Forall:
    case FK::Exists:
      out << (f->k == FK::Forall ? "forall " : "exists ")
          << (f->var == VarX ? "x" : "y") << " (";
      print_rec(out, sig, f->l, 0);
      out << ")";
      return;
    case FK::Count: {
      const char* c = f->cmp == Cmp::Le ? "<=" : f->cmp == Cmp::Ge ? ">=" : "=";
      out << "exists" << c << f->n << " " << (f->var == VarX ? "x" : "y")
          << " (";
      print_rec(out, sig, f->guard, 4);
      out << " & ";
      print_rec(out, sig, f->l, 5);
      out << ")";
      return;
    }
    case FK::PfdAtom: {
      out << "P[";
      for (size_t i = 0; i < f->pfd->left.size(); ++i)
        out << (i ? " " : "") << sig.bin[f->pfd->left[i]];
      if (!f->pfd->right.empty()) {
        out << ",";
        for (int b : f->pfd->right) out << " " << sig.bin[b];
      }
      out << "]";
      return;
    }
  }
}

void print_ids(std::ostringstream& out, const char* kw,
               const std::vector<std::string>& ids) {
  if (ids.empty()) return;
  out << "  " << kw << " ";
  for (size_t i = 0; i < ids.size(); ++i) out << (i ? ", " : "") << ids[i];
  out << ";\n";
}

}  // namespace

std::string print_formula(const Signature& sig, const F& f) {
  std::ostringstream out;
  print_rec(out, sig, f, 0);
  return out.str();
}

std::string print_problem(const Problem& p) {
  const Signature& sig = p.sig;
  std::ostringstream out;
  std::vector<std::string> un, bin, keys;
  for (size_t i = 0; i < sig.un.size(); ++i) un.push_back(sig.un[i]);
  for (size_t i = 0; i < sig.bin.size(); ++i) {
    if (sig.key_base[i]) keys.push_back(sig.bin[i]);
    else if (!sig.key[i]) bin.push_back(sig.bin[i]);
  }
  out << "sig {\n";
  print_ids(out, "unary", un);
  print_ids(out, "binary", bin);
  print_ids(out, "key", keys);
  print_ids(out, "const", sig.consts);
  out << "}\n";
  out << "phi: " << print_formula(sig, p.phi) << ";\n";
  out << "db {\n";
  for (const auto& g : p.db.lits) {
    out << "  " << (g.pos ? "" : "~")
        << (g.binary ? sig.bin[g.pred] : sig.un[g.pred]) << "("
        << sig.consts[g.c0];
    if (g.binary) out << ", " << sig.consts[g.c1];
    out << ");\n";
  }
  out << "}\n";
  out << "pfd {\n";
  for (const auto& k : p.pfds) {
    out << "  P[";
    for (size_t i = 0; i < k.left.size(); ++i)
      out << (i ? " " : "") << sig.bin[k.left[i]];
    if (!k.right.empty()) {
      out << ",";
      for (int b : k.right) out << " " << sig.bin[b];
    }
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace gcdk::frontend
