#pragma once

// Line-oriented session scripts. One command per line, `#` starts a
// comment, values are bound to names with a trailing `as NAME`. See
// docs/script-grammar.md for the grammar.

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rees/invariants.hpp"

namespace rees {

struct SessionOptions {
  /// Reject any bound polynomial of larger total degree (0 = no cap).
  unsigned max_degree = 0;
  /// Integer box [lo, hi]^d used as probes for objects created without any.
  std::optional<std::pair<long, long>> default_grid;
};

struct SessionReport {
  std::string text;
  std::vector<nlohmann::json> records;
  unsigned passed = 0;
  unsigned failed = 0;
  unsigned errors = 0;

  bool ok() const { return failed == 0 && errors == 0; }
};

namespace session_detail {

/// Splits a line into words, keeping each balanced (...) group as a
/// single token.
inline std::vector<std::string> tokenize(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : line) {
    if (depth == 0 && std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
      continue;
    }
    if (ch == '(') ++depth;
    if (ch == ')') {
      if (--depth < 0) throw ParseError("unbalanced ')'", lineno);
    }
    cur += ch;
  }
  if (depth != 0) throw ParseError("unbalanced '('", lineno);
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

/// Splits at commas that are not nested inside parentheses.
inline std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string strip_parens(const std::string& tok) {
  std::string t = trim(tok);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw Error("expected a parenthesized list, got '" + tok + "'");
  return t.substr(1, t.size() - 2);
}

inline std::vector<std::string> parse_name_list(const std::string& tok) {
  std::vector<std::string> out;
  std::string inner = trim(strip_parens(tok));
  if (inner.empty()) return out;
  for (auto& p : split_top(inner)) out.push_back(trim(p));
  return out;
}

inline Point parse_point(const std::string& tok, const RingPtr& ring) {
  Point p;
  std::string inner = trim(strip_parens(tok));
  if (!inner.empty()) {
    for (auto& c : split_top(inner)) p.coords.push_back(ring->field().reduce(parse_scalar(trim(c))));
  }
  if (p.size() != ring->nvars()) {
    throw Error("point " + tok + " has " + std::to_string(p.size()) + " coordinates, ring has " +
                std::to_string(ring->nvars()));
  }
  return p;
}

inline std::vector<ExtRational> parse_tuple(const std::string& tok) {
  std::vector<ExtRational> out;
  std::string inner = trim(strip_parens(tok));
  if (inner.empty()) return out;
  for (auto& c : split_top(inner)) out.push_back(parse_ext_rational(trim(c)));
  return out;
}

inline Generator parse_generator(const std::string& tok, const RingPtr& ring) {
  auto parts = split_top(strip_parens(tok));
  if (parts.size() != 2) throw Error("generator must be (poly, weight): " + tok);
  return Generator{parse_poly(parts[0], ring), parse_scalar(trim(parts[1]))};
}

inline std::string join(const std::vector<std::string>& v, std::size_t from, std::size_t to, const char* sep = " ") {
  std::string s;
  for (std::size_t i = from; i < to && i < v.size(); ++i) s += (i > from ? sep : "") + v[i];
  return s;
}

inline std::string indent(const std::string& text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line)) out += "  " + line + "\n";
  return out;
}

inline std::string tuple_str(const std::vector<ExtRational>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].str();
  return s + ")";
}

using QueryValue = std::variant<ExtRational, bool, std::vector<ExtRational>, Poly>;

inline std::string value_str(const QueryValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ExtRational>) return x.str();
        else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else if constexpr (std::is_same_v<T, Poly>) return x.str();
        else return tuple_str(x);
      },
      v);
}

}  // namespace session_detail

class Session {
public:
  using Value = std::variant<RingPtr, ReesAlg, Poly, BasicObject, ElimChain>;

  explicit Session(SessionOptions opts = {}) : opts_(std::move(opts)) {}

  static const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {
        "ring",      "rees",          "poly",        "object",  "diffclose", "reldiffclose", "ord",
        "sing?",     "singgens",      "tau",         "eliminate", "transversals", "chain",   "twist",
        "odot",      "tilde",         "blowup",      "pairtransform", "stricttransform", "commute",
        "word",      "tfn",           "gamma",       "monomial?", "permissible?", "assert", "probe-grid",
        "linchange", "stratify",      "lineage",     "show",    "value",     "size"};
    return c;
  }

  SessionReport run(const std::string& script) {
    struct Line {
      std::size_t no;
      std::string raw;
      std::vector<std::string> tokens;
    };
    std::vector<Line> lines;
    std::istringstream is(script);
    std::string raw;
    std::size_t no = 0;
    while (std::getline(is, raw)) {
      ++no;
      std::string text = raw.substr(0, raw.find('#'));
      text = session_detail::trim(text);
      if (text.empty()) continue;
      auto toks = session_detail::tokenize(text, no);
      const auto& cmds = commands();
      if (std::find(cmds.begin(), cmds.end(), toks[0]) == cmds.end()) {
        throw ParseError("unknown command '" + toks[0] + "'", no);
      }
      lines.push_back({no, text, std::move(toks)});
    }

    SessionReport rep;
    std::ostringstream os;
    for (const auto& l : lines) {
      os << "> " << l.raw << "\n";
      nlohmann::json rec{{"line", l.no}, {"command", l.raw}};
      try {
        out_.str("");
        status_.clear();
        record_ = nlohmann::json();
        execute(l.tokens, l.no);
        if (status_ == "pass") ++rep.passed;
        if (status_ == "fail") ++rep.failed;
        rec["status"] = status_.empty() ? "ok" : status_;
        if (!record_.is_null()) rec["value"] = record_;
        os << session_detail::indent(out_.str());
      } catch (const Error& e) {
        ++rep.errors;
        rec["status"] = "error";
        rec["error"] = e.what();
        os << session_detail::indent(out_.str()) << "  ERROR line " << l.no << ": " << e.what() << "\n";
      }
      rep.records.push_back(std::move(rec));
    }
    if (!lines.empty()) {
      os << "summary: " << rep.passed << " passed, " << rep.failed << " failed, " << rep.errors << " errors\n";
    }
    rep.text = os.str();
    return rep;
  }

  const std::map<std::string, Value>& bindings() const { return env_; }
  const Lineage& lineage() const { return lineage_; }

private:
  using Toks = std::vector<std::string>;

  // ---- binding access

  const Value& lookup(const std::string& name) const {
    auto it = env_.find(name);
    if (it == env_.end()) throw Error("unbound name '" + name + "'");
    return it->second;
  }

  RingPtr ring(const std::string& name) const {
    const Value& v = lookup(name);
    if (auto r = std::get_if<RingPtr>(&v)) return *r;
    if (auto a = std::get_if<ReesAlg>(&v)) return a->ring();
    if (auto p = std::get_if<Poly>(&v)) return p->ring();
    if (auto b = std::get_if<BasicObject>(&v)) return b->ring();
    return std::get<ElimChain>(v).final_algebra().ring();
  }

  ReesAlg algebra(const std::string& name) const {
    const Value& v = lookup(name);
    if (auto a = std::get_if<ReesAlg>(&v)) return *a;
    if (auto b = std::get_if<BasicObject>(&v)) return b->algebra;
    if (auto c = std::get_if<ElimChain>(&v)) return c->final_algebra();
    throw Error("'" + name + "' is not a Rees algebra");
  }

  BasicObject object(const std::string& name) const {
    const Value& v = lookup(name);
    if (auto b = std::get_if<BasicObject>(&v)) return *b;
    if (auto a = std::get_if<ReesAlg>(&v)) return make_basic_object(*a, {}, default_probes(a->ring()));
    throw Error("'" + name + "' is not a basic object");
  }

  Poly poly(const std::string& name) const {
    const Value& v = lookup(name);
    if (auto p = std::get_if<Poly>(&v)) return *p;
    throw Error("'" + name + "' is not a polynomial");
  }

  const ElimChain& chain(const std::string& name) const {
    const Value& v = lookup(name);
    if (auto c = std::get_if<ElimChain>(&v)) return *c;
    throw Error("'" + name + "' is not an elimination chain");
  }

  void check_degree(const Poly& f) const {
    if (opts_.max_degree && f.degree() > static_cast<int>(opts_.max_degree)) {
      throw ResourceLimit("polynomial of degree " + std::to_string(f.degree()) + " exceeds --max-degree " +
                          std::to_string(opts_.max_degree));
    }
  }

  void bind(const std::string& name, Value v) {
    if (name.empty()) return;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Poly>) check_degree(x);
          else if constexpr (std::is_same_v<T, ReesAlg>) for (const auto& g : x.gens()) check_degree(g.poly);
          else if constexpr (std::is_same_v<T, BasicObject>) for (const auto& g : x.algebra.gens()) check_degree(g.poly);
        },
        v);
    env_[name] = std::move(v);
  }

  std::vector<Point> grid(const RingPtr& ring, long lo, long hi) const {
    const std::size_t d = ring->nvars();
    if (hi < lo) throw Error("empty probe box");
    const auto side = static_cast<std::size_t>(hi - lo + 1);
    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) {
      total *= side;
      if (total > 20000) throw ResourceLimit("probe grid larger than 20000 points");
    }
    std::vector<Point> out;
    std::vector<long> cur(d, lo);
    for (std::size_t k = 0; k < total; ++k) {
      Point p;
      for (long c : cur) p.coords.push_back(ring->field().reduce(Scalar(c)));
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
      for (std::size_t i = d; i-- > 0;) {
        if (++cur[i] <= hi) break;
        cur[i] = lo;
      }
    }
    return out;
  }

  std::vector<Point> default_probes(const RingPtr& ring) const {
    if (!opts_.default_grid) return {};
    return grid(ring, opts_.default_grid->first, opts_.default_grid->second);
  }

  // ---- token helpers

  /// Value following a keyword, if present.
  static std::optional<std::string> option(const Toks& t, const std::string& key, std::size_t from = 1) {
    for (std::size_t i = from; i + 1 < t.size(); ++i) {
      if (t[i] == key) return t[i + 1];
    }
    return std::nullopt;
  }

  static std::string need(const Toks& t, const std::string& key, const std::string& cmd) {
    auto v = option(t, key);
    if (!v) throw Error(cmd + ": missing '" + key + " ...'");
    return *v;
  }

  /// Tokens after a keyword up to the next keyword in `stops`.
  static Toks words_after(const Toks& t, const std::string& key, std::initializer_list<const char*> stops) {
    Toks out;
    auto it = std::find(t.begin(), t.end(), key);
    if (it == t.end()) return out;
    for (++it; it != t.end(); ++it) {
      if (std::any_of(stops.begin(), stops.end(), [&](const char* s) { return *it == s; })) break;
      out.push_back(*it);
    }
    return out;
  }

  /// Splits off a trailing `as NAME [NAME]`.
  static Toks take_as(Toks& t) {
    Toks names;
    auto it = std::find(t.begin(), t.end(), "as");
    if (it == t.end()) return names;
    names.assign(it + 1, t.end());
    t.erase(it, t.end());
    return names;
  }

  static void arity(const Toks& t, std::size_t min, const std::string& usage) {
    if (t.size() < min) throw Error("usage: " + usage);
  }

  static EliminationMode parse_mode(const Toks& t) {
    auto m = option(t, "mode");
    if (!m || *m == "passthrough") return EliminationMode::passthrough;
    if (*m == "charpoly-all") return EliminationMode::charpoly_all;
    throw Error("unknown elimination mode '" + *m + "'");
  }

  std::vector<Point> parse_points(const Toks& words, const RingPtr& ring) const {
    std::vector<Point> out;
    for (const auto& w : words) out.push_back(session_detail::parse_point(w, ring));
    return out;
  }

  // ---- execution

  void execute(Toks t, std::size_t lineno) {
    const std::string cmd = t[0];
    if (cmd == "assert") return do_assert(t, lineno);
    Toks as = take_as(t);
    const std::string name = as.empty() ? "" : as[0];

    if (cmd == "ring") {
      arity(t, 5, "ring NAME over FIELD vars V...");
      Field k = parse_field(need(t, "over", cmd));
      Toks vars = words_after(t, "vars", {});
      if (vars.empty()) throw Error("ring: no variables");
      auto r = make_ring(k, vars);
      bind(t[1], r);
      out_ << r->field().name() << "[" << session_detail::join(vars, 0, vars.size(), ",") << "]\n";
      return;
    }
    if (cmd == "rees") {
      arity(t, 4, "rees NAME over RING = (poly, w) ...");
      RingPtr r = ring(need(t, "over", cmd));
      ReesAlg G(r);
      for (const auto& g : words_after(t, "=", {})) {
        Generator gen = session_detail::parse_generator(g, r);
        G.add(gen.poly, gen.weight);
      }
      bind(t[1], G);
      out_ << serialize(G);
      return;
    }
    if (cmd == "poly") {
      arity(t, 6, "poly NAME over RING = EXPR");
      RingPtr r = ring(need(t, "over", cmd));
      auto eq = std::find(t.begin(), t.end(), "=");
      if (eq == t.end()) throw Error("poly: missing '='");
      Poly f = parse_poly(session_detail::join(t, static_cast<std::size_t>(eq - t.begin()) + 1, t.size()), r);
      bind(t[1], f);
      out_ << f.str() << "\n";
      return;
    }
    if (cmd == "object") {
      arity(t, 4, "object NAME from ALG [divisors V...] [probes P...]");
      ReesAlg G = algebra(need(t, "from", cmd));
      std::vector<Divisor> divs;
      for (const auto& v : words_after(t, "divisors", {"probes"})) divs.push_back(Divisor{v, 0, false});
      auto probes = parse_points(words_after(t, "probes", {"divisors"}), G.ring());
      if (probes.empty()) probes = default_probes(G.ring());
      BasicObject B = make_basic_object(G, divs, probes);
      lineage_.add_root(t[1], B);
      bind(t[1], B);
      describe(B);
      return;
    }
    if (cmd == "diffclose") {
      arity(t, 2, "diffclose ALG as NAME");
      Diagnostics diag;
      ReesAlg D = diff_closure(normalize_weights(algebra(t[1])), &diag);
      bind(name, D);
      out_ << serialize(D);
      for (const auto& n : diag.notes) out_ << "note: " << n << "\n";
      return;
    }
    if (cmd == "reldiffclose") {
      arity(t, 4, "reldiffclose ALG in VAR as NAME");
      ReesAlg D = rel_diff_closure(normalize_weights(algebra(t[1])), need(t, "in", cmd));
      bind(name, D);
      out_ << serialize(D);
      return;
    }
    if (cmd == "singgens") {
      arity(t, 2, "singgens ALG");
      for (const Poly& p : sing_presentation(normalize_weights(algebra(t[1])))) out_ << p.str() << "\n";
      return;
    }
    if (cmd == "transversals") {
      arity(t, 6, "transversals ALG at POINT var V");
      ReesAlg G = algebra(t[1]);
      Point x = session_detail::parse_point(need(t, "at", cmd), G.ring());
      auto cands = transversal_candidates(G, x, G.ring()->index_of(need(t, "var", cmd)));
      if (cands.empty()) out_ << "none\n";
      for (const auto& c : cands) out_ << "gen " << c.gen_index << " degree " << c.degree << " " << c.monic_form.str() << "\n";
      record_ = cands.size();
      return;
    }
    if (cmd == "eliminate") {
      arity(t, 6, "eliminate ALG var V (at POINT | gen INDEX) [mode M] [as NAME]");
      ReesAlg G = algebra(t[1]);
      const std::size_t v = G.ring()->index_of(need(t, "var", cmd));
      Transversal tr;
      if (auto gi = option(t, "gen")) {
        tr = make_transversal(G, std::stoul(*gi), v);
      } else {
        Point x = session_detail::parse_point(need(t, "at", cmd), G.ring());
        auto cands = transversal_candidates(G, x, v);
        if (cands.empty()) throw NoTransversal(1, G.ring()->var(v));
        tr = cands[default_transversal_choice(cands)];
      }
      Diagnostics diag;
      ReesAlg R = eliminate(G, tr, parse_mode(t), &diag);
      bind(name, R);
      out_ << "transversal " << tr.monic_form.str() << "\n" << serialize(R);
      for (const auto& n : diag.notes) out_ << "note: " << n << "\n";
      return;
    }
    if (cmd == "chain") {
      arity(t, 6, "chain ALG at POINT vars V... [mode M] as NAME");
      ReesAlg G = algebra(t[1]);
      Point x = session_detail::parse_point(need(t, "at", cmd), G.ring());
      ChainOptions o;
      o.mode = parse_mode(t);
      ElimChain c = eliminate_chain(G, x, words_after(t, "vars", {"mode", "at"}), o);
      bind(name, c);
      out_ << serialize(c);
      return;
    }
    if (cmd == "twist") {
      arity(t, 4, "twist ALG by W as NAME");
      ReesAlg H = twist(algebra(t[1]), parse_scalar(need(t, "by", cmd)));
      bind(name, H);
      out_ << serialize(H);
      return;
    }
    if (cmd == "odot") {
      arity(t, 3, "odot ALG ALG as NAME");
      ReesAlg H = odot(algebra(t[1]), algebra(t[2]));
      bind(name, H);
      out_ << serialize(H);
      return;
    }
    if (cmd == "tilde") {
      arity(t, 6, "tilde ALG at POINT level M as NAME");
      ReesAlg G = algebra(t[1]);
      Point x = session_detail::parse_point(need(t, "at", cmd), G.ring());
      TildeResult r = tilde(G, x, static_cast<unsigned>(std::stoul(need(t, "level", cmd))));
      bind(name, r.algebra);
      out_ << "omega " << r.omega.str() << "\n" << serialize(r.algebra);
      out_ << "singular at x: " << (r.singular_at_x ? "true" : "false") << ", tau "
           << (r.tau_determined ? std::to_string(r.tau) : std::string("undetermined")) << "\n";
      return;
    }
    if (cmd == "blowup") {
      arity(t, 6, "blowup OBJ center (V,...) chart V [probes P...] as NAME");
      BasicObject B = object(t[1]);
      CenterSpec c{session_detail::parse_name_list(need(t, "center", cmd))};
      auto probes = parse_points(words_after(t, "probes", {"center", "chart"}), B.ring());
      if (probes.empty()) probes = default_probes(B.ring());
      BasicObject B1 = blowup_chart(B, c, need(t, "chart", cmd), probes);
      add_lineage(t[1], name, c, need(t, "chart", cmd), B1);
      bind(name, B1);
      describe(B1);
      return;
    }
    if (cmd == "pairtransform" || cmd == "stricttransform") {
      arity(t, 6, cmd + " POLY [weight B] center (V,...) chart V as NAME");
      Poly f = poly(t[1]);
      CenterSpec c{session_detail::parse_name_list(need(t, "center", cmd))};
      Poly g = cmd == "pairtransform"
                   ? pair_transform(f, static_cast<unsigned>(std::stoul(need(t, "weight", cmd))), c, need(t, "chart", cmd))
                   : strict_transform(f, c, need(t, "chart", cmd));
      bind(name, g);
      out_ << g.str() << "\n";
      return;
    }
    if (cmd == "commute") {
      arity(t, 8, "commute OBJ chain CHAIN center (V,...) chart V [probes P...] as UP DOWN");
      BasicObject B = object(t[1]);
      const ElimChain& ch = chain(need(t, "chain", cmd));
      CenterSpec c{session_detail::parse_name_list(need(t, "center", cmd))};
      auto probes = parse_points(words_after(t, "probes", {"center", "chart", "chain"}), B.ring());
      if (probes.empty()) probes = default_probes(B.ring());
      CommuteResult r = commute_elimination(B, ch, c, need(t, "chart", cmd), probes);
      if (as.size() >= 1) {
        add_lineage(t[1], as[0], c, need(t, "chart", cmd), r.upstairs);
        bind(as[0], r.upstairs);
      }
      if (as.size() >= 2) bind(as[1], r.downstairs);
      out_ << "downstairs transform\n" << serialize(r.downstairs.algebra);
      out_ << "elimination of the upstairs transform\n" << serialize(r.eliminated_upstairs);
      for (const auto& k : r.checks) {
        out_ << "probe " << k.upstairs_point.str() << " -> " << k.image_point.str() << ": "
             << k.eliminated_after.str() << " vs " << k.transformed_after.str() << (k.equal ? "" : "  MISMATCH")
             << "\n";
      }
      record_ = {{"checks", r.checks.size()}, {"ok", r.ok}};
      if (!r.ok) throw Error("commute: ord mismatch at a singular probe point");
      return;
    }
    if (cmd == "probe-grid") {
      arity(t, 3, "probe-grid OBJ box LO..HI | probe-grid OBJ points P...");
      BasicObject B = object(t[1]);
      if (auto box = option(t, "box")) {
        auto dots = box->find("..");
        if (dots == std::string::npos) throw Error("probe-grid: box must be LO..HI");
        B.probes = grid(B.ring(), std::stol(box->substr(0, dots)), std::stol(box->substr(dots + 2)));
      } else {
        B.probes = parse_points(words_after(t, "points", {}), B.ring());
      }
      B.word_history.back() = max_w_ord(B);
      refresh_divisor_ages(B);
      bind(name.empty() ? t[1] : name, B);
      out_ << B.probes.size() << " probe points\n";
      return;
    }
    if (cmd == "linchange") {
      arity(t, 6, "linchange ALG|POLY matrix ((..),..) shift (..) as NAME");
      std::vector<std::vector<Scalar>> m;
      for (const auto& row : session_detail::split_top(session_detail::strip_parens(need(t, "matrix", cmd)))) {
        std::vector<Scalar> r;
        for (const auto& c : session_detail::split_top(session_detail::strip_parens(session_detail::trim(row)))) {
          r.push_back(parse_scalar(session_detail::trim(c)));
        }
        m.push_back(std::move(r));
      }
      const Value& v = lookup(t[1]);
      RingPtr r = ring(t[1]);
      Point shift = session_detail::parse_point(need(t, "shift", cmd), r);
      if (auto p = std::get_if<Poly>(&v)) {
        Poly g = linear_change(*p, m, shift);
        bind(name, g);
        out_ << g.str() << "\n";
      } else {
        ReesAlg G = algebra(t[1]), H(r);
        for (const auto& g : G.gens()) H.add(linear_change(g.poly, m, shift), g.weight);
        bind(name, H);
        out_ << serialize(H);
      }
      return;
    }
    if (cmd == "stratify") {
      arity(t, 2, "stratify OBJ");
      auto rows = stratify(object(t[1]));
      out_ << format_table(rows);
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : rows) arr.push_back(to_json(r));
      record_ = arr;
      return;
    }
    if (cmd == "lineage") {
      out_ << lineage_.serialize();
      return;
    }
    if (cmd == "show") {
      arity(t, 2, "show NAME");
      show(t[1]);
      return;
    }
    // Everything else is a query.
    auto q = query(t);
    record_ = session_detail::value_str(q);
    out_ << session_detail::value_str(q) << "\n";
  }

  void describe(const BasicObject& B) {
    out_ << serialize(B.algebra) << "divisors";
    for (const auto& d : B.divisors) out_ << " " << d.var << "@" << d.birth_stage << (d.old ? "(old)" : "");
    out_ << "\nmax-w-ord history";
    for (const auto& w : B.word_history) out_ << " " << w.str();
    out_ << "\n";
  }

  void show(const std::string& name) {
    const Value& v = lookup(name);
    if (auto r = std::get_if<RingPtr>(&v)) {
      out_ << (*r)->field().name() << "[" << session_detail::join((*r)->vars(), 0, (*r)->nvars(), ",") << "]\n";
    } else if (auto a = std::get_if<ReesAlg>(&v)) {
      out_ << serialize(*a);
    } else if (auto p = std::get_if<Poly>(&v)) {
      out_ << p->str() << "\n";
    } else if (auto b = std::get_if<BasicObject>(&v)) {
      describe(*b);
    } else {
      out_ << serialize(std::get<ElimChain>(v));
    }
  }

  void add_lineage(const std::string& parent, const std::string& label, const CenterSpec& c,
                   const std::string& chart, const BasicObject& B) {
    auto p = lineage_.find(parent);
    if (!p) p = lineage_.add_root(parent, object(parent));
    lineage_.add_chart(*p, label.empty() ? parent + "." + chart : label, c, chart, B);
  }

  session_detail::QueryValue query(const Toks& t) {
    const std::string& cmd = t[0];
    arity(t, 2, cmd + " NAME ...");
    auto at_point = [&](const RingPtr& r) { return session_detail::parse_point(need(t, "at", cmd), r); };
    if (cmd == "ord") {
      ReesAlg G = algebra(t[1]);
      Point x = at_point(G.ring());
      Toks vars = words_after(t, "vars", {"at", "level", "mode"});
      if (!vars.empty()) return ord_dm(G, x, vars, parse_mode(t));
      if (auto lvl = option(t, "level")) {
        ChainPolicy pol;
        pol.mode = parse_mode(t);
        return ord_dm(G, x, static_cast<unsigned>(std::stoul(*lvl)), pol);
      }
      return ord_at(G, x);
    }
    if (cmd == "sing?") {
      ReesAlg G = algebra(t[1]);
      return is_singular_at(normalize_weights(G), at_point(G.ring()));
    }
    if (cmd == "tau") {
      ReesAlg G = algebra(t[1]);
      TauResult r = tau_at(G, at_point(G.ring()));
      for (const auto& [l, e] : r.certificate) out_ << "form " << l.str() << " level " << e << "\n";
      return ExtRational(static_cast<long>(r.tau));
    }
    if (cmd == "word") {
      BasicObject B = object(t[1]);
      return w_ord(B, at_point(B.ring()));
    }
    if (cmd == "tfn") {
      BasicObject B = object(t[1]);
      TValue v = t_fn(B, at_point(B.ring()));
      return std::vector<ExtRational>{v.word, ExtRational(static_cast<long>(v.old_count))};
    }
    if (cmd == "gamma") {
      ReesAlg G = algebra(t[1]);
      ChainPolicy pol;
      pol.preference = words_after(t, "prefer", {"at"});
      Diagnostics diag;
      GammaValue g = gamma(G, at_point(G.ring()), pol, &diag);
      return g.coords;
    }
    if (cmd == "monomial?") {
      BasicObject B = object(t[1]);
      MonomialCase m = monomial_case(B);
      out_ << "witness: " << m.witness << "\n";
      for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        out_ << "gen " << i << " exponents";
        for (std::size_t j = 0; j < m.exponents[i].size(); ++j) out_ << " " << m.divisor_vars[j] << "^" << m.exponents[i][j];
        out_ << "\n";
      }
      return m.monomial;
    }
    if (cmd == "permissible?") {
      BasicObject B = object(t[1]);
      auto r = check_permissible(B, CenterSpec{session_detail::parse_name_list(need(t, "center", cmd))});
      for (const auto& f : r.failures) out_ << "fails: " << f << "\n";
      return r.ok;
    }
    if (cmd == "value") return poly(t[1]);
    if (cmd == "size") return ExtRational(static_cast<long>(algebra(t[1]).size()));
    throw Error("'" + cmd + "' is not a query");
  }

  void do_assert(const Toks& t, std::size_t lineno) {
    if (t.size() >= 4 && (t[2] == "contains" || t[2] == "contains-exact" || t[2] == "lacks")) {
      ReesAlg G = algebra(t[1]);
      Generator g = session_detail::parse_generator(session_detail::join(t, 3, t.size()), G.ring());
      bool has = false;
      if (t[2] == "contains-exact") {
        for (const auto& h : G.gens()) has = has || (h.poly == g.poly && h.weight == g.weight);
      } else {
        has = G.contains(g.poly, g.weight);
      }
      bool pass = t[2] == "lacks" ? !has : has;
      verdict(pass, session_detail::join(t, 1, t.size()), has ? "present" : "absent", lineno);
      return;
    }
    auto op = std::find_if(t.begin(), t.end(), [](const std::string& s) { return s == "==" || s == "~="; });
    if (op == t.end()) throw Error("assert: expected '==' or '~='");
    Toks lhs(t.begin() + 1, op);
    const std::string expected = session_detail::join(t, static_cast<std::size_t>(op - t.begin()) + 1, t.size());
    if (lhs.empty()) throw Error("assert: empty query");
    auto got = query(lhs);
    bool pass = std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, ExtRational>) return x == parse_ext_rational(session_detail::trim(expected));
          else if constexpr (std::is_same_v<T, bool>) {
            if (expected != "true" && expected != "false") throw Error("assert: expected true or false");
            return x == (expected == "true");
          } else if constexpr (std::is_same_v<T, Poly>) {
            Poly e = parse_poly(expected, x.ring());
            if (*op == "==") return x == e;
            return (x.is_zero() && e.is_zero()) || (!x.is_zero() && !e.is_zero() && x.monic() == e.monic());
          } else {
            return x == session_detail::parse_tuple(expected);
          }
        },
        got);
    verdict(pass, session_detail::join(t, 1, t.size()), session_detail::value_str(got), lineno);
  }

  void verdict(bool pass, const std::string& what, const std::string& got, std::size_t lineno) {
    status_ = pass ? "pass" : "fail";
    record_ = got;
    if (pass) {
      out_ << "PASS " << what << "\n";
    } else {
      out_ << "FAIL line " << lineno << ": " << what << " (got " << got << ")\n";
    }
  }

  SessionOptions opts_;
  std::map<std::string, Value> env_;
  Lineage lineage_;
  std::ostringstream out_;
  std::string status_;
  nlohmann::json record_;
};

inline SessionReport run_session(const std::string& script, const SessionOptions& opts = {}) {
  Session s(opts);
  return s.run(script);
}

inline SessionReport run_session_file(const std::string& path, const SessionOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read script " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return run_session(ss.str(), opts);
}

}  // namespace rees
