// Copyright 2026 The qspectro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Double-sided Feynman diagrams: representation, commutator expansion, conjugate-pair
// reduction, a small text DSL, and the catalog of standard spectroscopies.
//
// Slot j holds the interaction at time variable t_j; slot 0 is the first interaction
// (t = 0) and slot n is the signal emitted at the final time.

#include <algorithm>
#include <cctype>
#include <complex>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qspectro/errors.hpp"
#include "qspectro/models.hpp"

namespace qspectro {

enum class Side { Ket, Bra };

struct Interaction {
  int slot = 0;
  Side side = Side::Ket;
  DipoleKind kind = DipoleKind::Electric;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

class FeynmanDiagram {
 public:
  /// Throws InvariantError unless the slots are exactly 0..n (any input order) and the
  /// last slot acts on the ket.
  explicit FeynmanDiagram(std::vector<Interaction> interactions)
      : interactions_(std::move(interactions)) {
    if (interactions_.empty()) throw InvariantError("diagram needs at least the signal interaction");
    std::sort(interactions_.begin(), interactions_.end(),
              [](const Interaction& a, const Interaction& b) { return a.slot < b.slot; });
    for (size_t i = 0; i < interactions_.size(); ++i) {
      if (interactions_[i].slot != static_cast<int>(i))
        throw InvariantError("diagram slots must be 0..n, each used once");
    }
    if (interactions_.back().side != Side::Ket)
      throw InvariantError("the final interaction must act on the ket");
  }

  int order() const { return static_cast<int>(interactions_.size()) - 1; }
  const std::vector<Interaction>& interactions() const { return interactions_; }
  const Interaction& at(int slot) const { return interactions_.at(static_cast<size_t>(slot)); }

  int bra_count() const {
    return static_cast<int>(std::count_if(interactions_.begin(), interactions_.end(),
                                          [](const Interaction& x) { return x.side == Side::Bra; }));
  }
  int ket_count() const { return order() + 1 - bra_count(); }

  /// Commutator-expansion sign (-1)^(bra count).
  int sign() const { return bra_count() % 2 == 0 ? 1 : -1; }

  bool uses(DipoleKind kind) const {
    return std::any_of(interactions_.begin(), interactions_.end(),
                       [kind](const Interaction& x) { return x.kind == kind; });
  }

  /// Hermitian-conjugate partner: every non-final interaction changes side.
  FeynmanDiagram conjugate_partner() const {
    auto xs = interactions_;
    for (size_t i = 0; i + 1 < xs.size(); ++i)
      xs[i].side = xs[i].side == Side::Ket ? Side::Bra : Side::Ket;
    return FeynmanDiagram(std::move(xs));
  }

  /// Canonical DSL text, e.g. "order 1; t0 ket E; signal ket E".
  std::string to_string() const {
    std::ostringstream out;
    out << "order " << order();
    for (const auto& x : interactions_) {
      out << "; ";
      if (x.slot == order())
        out << "signal";
      else
        out << 't' << x.slot;
      out << (x.side == Side::Ket ? " ket " : " bra ") << (x.kind == DipoleKind::Electric ? 'E' : 'M');
    }
    return out.str();
  }

  /// Correlation-function notation, e.g. "<mu(t1) mu(t0) rho mu(t...)>" with
  /// ket operators (latest leftmost) before rho and bra operators after it.
  std::string correlation_string() const {
    std::ostringstream out;
    out << '<';
    auto name = [this](const Interaction& x) {
      std::string op = x.kind == DipoleKind::Electric ? "mu" : "m";
      return op + "(t" + std::to_string(x.slot) + ")";
    };
    for (auto it = interactions_.rbegin(); it != interactions_.rend(); ++it)
      if (it->side == Side::Ket) out << name(*it) << ' ';
    out << "rho";
    for (const auto& x : interactions_)
      if (x.side == Side::Bra) out << ' ' << name(x);
    out << '>';
    return out.str();
  }

  friend bool operator==(const FeynmanDiagram& a, const FeynmanDiagram& b) {
    return a.interactions_ == b.interactions_;
  }

 private:
  std::vector<Interaction> interactions_;
};

/// Which part of a diagram's correlation value enters the response.
enum class Part { Full, Real, Imag };

struct WeightedDiagram {
  FeynmanDiagram diagram;
  Complex multiplier{1.0, 0.0};
  Part part = Part::Full;
};

/// R = sum_j multiplier_j * sign_j * part_j(<diagram_j>).
struct DiagramSet {
  int order = 0;
  std::vector<WeightedDiagram> terms;

  size_t size() const { return terms.size(); }

  /// Combines per-term correlation values (same order as `terms`) into the response.
  Complex combine(const std::vector<Complex>& values) const {
    if (values.size() != terms.size()) throw DimensionError("one value per diagram required");
    Complex total = 0.0;
    for (size_t j = 0; j < terms.size(); ++j) {
      const auto& t = terms[j];
      Complex v = values[j];
      if (t.part == Part::Real) v = v.real();
      if (t.part == Part::Imag) v = v.imag();
      total += t.multiplier * static_cast<double>(t.diagram.sign()) * v;
    }
    return total;
  }
};

/// The 2^n terms of mu(t)[mu(t_n), ... [mu(t_1), rho]]. Slot kinds default to Electric;
/// `kinds`, when given, supplies one kind per slot 0..n.
inline DiagramSet expand_commutators(int n, const std::vector<DipoleKind>& kinds = {}) {
  if (n < 0) throw InvariantError("order must be >= 0");
  if (!kinds.empty() && kinds.size() != static_cast<size_t>(n + 1))
    throw InvariantError("need one dipole kind per slot");
  DiagramSet set;
  set.order = n;
  const unsigned long count = 1UL << n;
  for (unsigned long mask = 0; mask < count; ++mask) {
    std::vector<Interaction> xs;
    for (int s = 0; s <= n; ++s) {
      const bool bra = s < n && ((mask >> s) & 1UL);
      const DipoleKind kind = kinds.empty() ? DipoleKind::Electric : kinds[static_cast<size_t>(s)];
      xs.push_back(Interaction{s, bra ? Side::Bra : Side::Ket, kind});
    }
    set.terms.push_back(WeightedDiagram{FeynmanDiagram(std::move(xs)), 1.0, Part::Full});
  }
  return set;
}

/// Merges each diagram with its Hermitian-conjugate partner. The pair contributes
/// 2 sign Re<D> for even n and 2i sign Im<D> for odd n, where D is the member whose
/// slot-0 interaction is on the ket. Terms without a partner of equal multiplier are
/// kept as they are. Order 0 is returned unchanged.
inline DiagramSet conjugate_reduce(const DiagramSet& set) {
  if (set.order == 0) return set;
  DiagramSet out;
  out.order = set.order;
  std::vector<bool> used(set.terms.size(), false);
  const bool odd = set.order % 2 == 1;
  for (size_t i = 0; i < set.terms.size(); ++i) {
    if (used[i]) continue;
    const auto& t = set.terms[i];
    if (t.part != Part::Full) {
      out.terms.push_back(t);
      used[i] = true;
      continue;
    }
    const FeynmanDiagram partner = t.diagram.conjugate_partner();
    size_t match = set.terms.size();
    for (size_t j = i + 1; j < set.terms.size(); ++j) {
      if (!used[j] && set.terms[j].part == Part::Full && set.terms[j].diagram == partner &&
          set.terms[j].multiplier == t.multiplier) {
        match = j;
        break;
      }
    }
    used[i] = true;
    if (match == set.terms.size()) {
      out.terms.push_back(t);
      continue;
    }
    used[match] = true;
    const auto& rep = t.diagram.at(0).side == Side::Ket ? t : set.terms[match];
    out.terms.push_back(WeightedDiagram{rep.diagram, t.multiplier * (odd ? Complex(0.0, 2.0) : Complex(2.0, 0.0)),
                                        odd ? Part::Imag : Part::Real});
  }
  return out;
}

inline DiagramSet filter(const DiagramSet& set, const std::function<bool(const FeynmanDiagram&)>& keep) {
  DiagramSet out;
  out.order = set.order;
  for (const auto& t : set.terms)
    if (keep(t.diagram)) out.terms.push_back(t);
  return out;
}

// ---------------------------------------------------------------------------
// DSL

namespace detail {

struct Token {
  std::string text;
  int line;
  int column;
};

inline std::vector<std::vector<Token>> split_statements(std::string_view text) {
  std::vector<std::vector<Token>> statements(1);
  int line = 1;
  int column = 1;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ';' || c == '\n') {
      if (!statements.back().empty()) statements.emplace_back();
      if (c == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++column;
      ++i;
      continue;
    }
    Token tok{"", line, column};
    while (i < text.size() && text[i] != ';' && text[i] != '\n' &&
           !std::isspace(static_cast<unsigned char>(text[i]))) {
      tok.text.push_back(text[i]);
      ++i;
      ++column;
    }
    statements.back().push_back(std::move(tok));
  }
  if (statements.back().empty()) statements.pop_back();
  return statements;
}

inline bool parse_int(const std::string& s, int& out) {
  if (s.empty() || s.size() > 6) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  out = std::stoi(s);
  return true;
}

}  // namespace detail

/// Parses the diagram DSL:
///
///   diagram     := "order" INT ";" interaction* ";" signal
///   interaction := "t" INT ("ket"|"bra") ("E"|"M")
///   signal      := "signal" "ket" ("E"|"M")
///
/// Statements are separated by ';' or newlines. Errors carry line and column.
inline FeynmanDiagram parse_diagram(std::string_view text) {
  const auto statements = detail::split_statements(text);
  if (statements.empty()) throw ParseError("empty diagram", 1, 1);
  const auto& head = statements.front();
  if (head[0].text != "order")
    throw ParseError("expected 'order', found '" + head[0].text + "'", head[0].line, head[0].column);
  if (head.size() != 2) {
    const auto& t = head.size() < 2 ? head[0] : head[2];
    throw ParseError("'order' takes exactly one integer", t.line, t.column);
  }
  int n = 0;
  if (!detail::parse_int(head[1].text, n))
    throw ParseError("order must be a non-negative integer", head[1].line, head[1].column);

  std::vector<Interaction> xs;
  std::vector<bool> seen(static_cast<size_t>(n) + 1, false);
  bool have_signal = false;
  for (size_t s = 1; s < statements.size(); ++s) {
    const auto& st = statements[s];
    const auto& kw = st[0];
    if (have_signal) throw ParseError("statement after 'signal'", kw.line, kw.column);
    int slot = 0;
    if (kw.text == "signal") {
      slot = n;
      have_signal = true;
    } else if (kw.text.size() > 1 && kw.text[0] == 't' && detail::parse_int(kw.text.substr(1), slot)) {
      if (slot >= n)
        throw ParseError("slot t" + std::to_string(slot) + " out of range for order " + std::to_string(n),
                         kw.line, kw.column);
    } else {
      throw ParseError("unknown keyword '" + kw.text + "'", kw.line, kw.column);
    }
    if (st.size() != 3) {
      const auto& t = st.size() < 3 ? st.back() : st[3];
      throw ParseError("interaction needs a side and a kind", t.line, t.column);
    }
    Side side;
    if (st[1].text == "ket")
      side = Side::Ket;
    else if (st[1].text == "bra")
      side = Side::Bra;
    else
      throw ParseError("expected 'ket' or 'bra', found '" + st[1].text + "'", st[1].line, st[1].column);
    if (have_signal && side == Side::Bra)
      throw ParseError("the signal interaction must act on the ket", st[1].line, st[1].column);
    DipoleKind kind;
    if (st[2].text == "E")
      kind = DipoleKind::Electric;
    else if (st[2].text == "M")
      kind = DipoleKind::Magnetic;
    else
      throw ParseError("expected 'E' or 'M', found '" + st[2].text + "'", st[2].line, st[2].column);
    if (seen[static_cast<size_t>(slot)]) throw ParseError("duplicate slot", kw.line, kw.column);
    seen[static_cast<size_t>(slot)] = true;
    xs.push_back(Interaction{slot, side, kind});
  }
  const auto& last = statements.back().back();
  if (!have_signal) throw ParseError("missing 'signal' statement", last.line, last.column + 1);
  for (int s = 0; s < n; ++s)
    if (!seen[static_cast<size_t>(s)])
      throw ParseError("slot t" + std::to_string(s) + " missing", last.line, last.column + 1);
  return FeynmanDiagram(std::move(xs));
}

// ---------------------------------------------------------------------------
// Catalog

enum class DelayRole {
  Scanned,    ///< sampled on a grid and usually Fourier transformed
  Fixed,      ///< held at a user-chosen value (e.g. 2D population time)
  FixedZero,  ///< two interactions share a time (pulse overlap in the table layout)
};

struct DelayAxisRole {
  std::string label;
  DelayRole role = DelayRole::Scanned;
};

struct CatalogEntry {
  std::string name;
  std::string description;
  std::string representative;
  DiagramSet diagrams;
  /// One role per delay tau_j = t_j - t_{j-1}, j = 1..n.
  std::vector<DelayAxisRole> delays;
};

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "linear_absorption", "cd",    "mcd",   "sum_frequency",    "pump_probe",
      "twod",              "raman", "twodcd", "four_wave_mixing", "fifth_order_raman"};
  return names;
}

/// Diagram set and delay layout for a named spectroscopy. Pump-probe uses the 2D layout
/// with the first (pump-pair) delay pinned at zero; Raman pins the first and last delays.
inline CatalogEntry catalog(std::string_view name) {
  using K = DipoleKind;
  auto scanned = [](int n) {
    std::vector<DelayAxisRole> d;
    for (int j = 1; j <= n; ++j) d.push_back({"tau" + std::to_string(j), DelayRole::Scanned});
    return d;
  };
  CatalogEntry e;
  e.name = std::string(name);
  if (name == "linear_absorption") {
    e.description = "Linear absorption (UV-vis, infrared, X-ray, Moessbauer)";
    e.representative = "<mu(t1) mu(0) rho(0)>";
    e.diagrams = expand_commutators(1);
    e.delays = scanned(1);
  } else if (name == "cd" || name == "mcd") {
    e.description = name == "cd" ? "Circular dichroism" : "Magnetic circular dichroism (static field in h0)";
    e.representative = "<m(t1) mu(0) rho(0)>";
    e.diagrams.order = 1;
    e.diagrams.terms.push_back(
        {FeynmanDiagram({{0, Side::Ket, K::Magnetic}, {1, Side::Ket, K::Electric}}), 1.0, Part::Full});
    e.diagrams.terms.push_back(
        {FeynmanDiagram({{0, Side::Ket, K::Electric}, {1, Side::Ket, K::Magnetic}}), 1.0, Part::Full});
    e.delays = scanned(1);
  } else if (name == "sum_frequency") {
    e.description = "Sum/difference frequency generation";
    e.representative = "<mu(t2) mu(t1) mu(0) rho(0)>";
    e.diagrams = expand_commutators(2);
    e.delays = scanned(2);
  } else if (name == "pump_probe") {
    e.description = "Pump-probe / transient absorption (pump pair coincident)";
    e.representative = "<mu(0) mu(t1) mu(t2) mu(0) rho(0)>";
    e.diagrams = expand_commutators(3);
    e.delays = {{"tau1", DelayRole::FixedZero}, {"tau2", DelayRole::Scanned}, {"tau3", DelayRole::Scanned}};
  } else if (name == "twod") {
    e.description = "2D spectroscopy (electronic, infrared, NMR)";
    e.representative = "<mu(t3) mu(t2) mu(t1) mu(0) rho(0)>";
    e.diagrams = expand_commutators(3);
    e.delays = {{"tau1", DelayRole::Scanned}, {"tau2", DelayRole::Fixed}, {"tau3", DelayRole::Scanned}};
  } else if (name == "raman") {
    e.description = "Raman (CARS, CSRS)";
    e.representative = "<mu(0) mu(t1) mu(t1) mu(0) rho(0)>";
    e.diagrams = expand_commutators(3);
    e.delays = {{"tau1", DelayRole::FixedZero}, {"tau2", DelayRole::Scanned}, {"tau3", DelayRole::FixedZero}};
  } else if (name == "twodcd") {
    e.description = "2D circular dichroism (first interaction magnetic)";
    e.representative = "<m(0) mu(t1) mu(t3) mu(t2) rho(0)>";
    e.diagrams = expand_commutators(3, {K::Magnetic, K::Electric, K::Electric, K::Electric});
    e.delays = {{"tau1", DelayRole::Scanned}, {"tau2", DelayRole::Fixed}, {"tau3", DelayRole::Scanned}};
  } else if (name == "four_wave_mixing") {
    e.description = "Four-wave mixing (fourth order)";
    e.representative = "<mu(t4) mu(t3) mu(t2) mu(t1) mu(0) rho(0)>";
    e.diagrams = expand_commutators(4);
    e.delays = scanned(4);
  } else if (name == "fifth_order_raman") {
    e.description = "Fifth-order Raman";
    e.representative = "<mu(t5) ... mu(t1) mu(0) rho(0)>";
    e.diagrams = expand_commutators(5);
    e.delays = scanned(5);
  } else {
    std::string list;
    for (const auto& n : catalog_names()) list += (list.empty() ? "" : ", ") + n;
    throw InvariantError("unknown spectroscopy '" + std::string(name) + "'; available: " + list);
  }
  return e;
}

}  // namespace qspectro
