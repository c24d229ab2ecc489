#ifndef MAXGROWTH_IO_HPP
#define MAXGROWTH_IO_HPP

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acts.hpp"
#include "linmod.hpp"
#include "series.hpp"
#include "stallings.hpp"
#include "surgery.hpp"
#include "words.hpp"

namespace maxgrowth {

using Json = nlohmann::ordered_json;

////////////////////////////////////////////////////////////////////////
// Files
////////////////////////////////////////////////////////////////////////

//! Reads a whole file; "-" is standard input.
inline std::string read_text(std::string const& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw contract_error("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json read_json(std::string const& path) {
  try {
    return Json::parse(read_text(path));
  } catch (Json::parse_error const& e) {
    throw contract_error(path + ": " + e.what());
  }
}

//! Writes text to a file, or to standard output when path is empty or "-".
inline void write_text(std::string const& path, std::string const& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw contract_error("cannot write " + path);
  }
  out << text;
}

namespace detail {
template <typename T>
T field(Json const& j, char const* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw contract_error(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (Json::exception const& e) {
    throw contract_error(std::string("bad field '") + key + "': " + e.what());
  }
}

inline Word word_field(Json const& j) {
  if (j.is_string()) {
    return parse_word(j.get<std::string>());
  }
  if (j.is_array()) {
    return j.get<Word>();
  }
  throw contract_error("word must be a string or an array of letters");
}
}  // namespace detail

////////////////////////////////////////////////////////////////////////
// Cores
////////////////////////////////////////////////////////////////////////

inline Json core_to_json(CoreAutomaton const& core) {
  Json edges = Json::array();
  for (auto const& e : core.positive_edges()) {
    edges.push_back({e.src, e.letter, e.dst});
  }
  Json basis = Json::array();
  for (auto const& w : schreier_basis(core).basis) {
    basis.push_back(format_word(w));
  }
  return Json{{"type", "core"},
              {"r", core.alphabet_rank()},
              {"vertices", core.size()},
              {"base", core.base()},
              {"edges", edges},
              {"deficit", to_string(deficit(core).total)},
              {"basis", basis}};
}

//! Accepts the output of core_to_json, or {"r", "generators": [...]}.
inline CoreAutomaton core_from_json(Json const& j) {
  int const r = detail::field<int>(j, "r");
  if (j.contains("edges")) {
    std::vector<Edge> edges;
    for (auto const& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) {
        throw contract_error("edge must be [src, letter, dst]");
      }
      edges.push_back({e[0].get<std::size_t>(), e[1].get<Letter>(), e[2].get<std::size_t>()});
    }
    return CoreAutomaton::from_edges(r, detail::field<std::size_t>(j, "vertices"),
                                     j.value("base", std::size_t{0}), edges);
  }
  std::vector<Word> gens;
  for (auto const& g : detail::field<Json>(j, "generators")) {
    gens.push_back(detail::word_field(g));
  }
  return build_core(gens, r);
}

////////////////////////////////////////////////////////////////////////
// Series
////////////////////////////////////////////////////////////////////////

inline Json series_to_json(GrowthSeries const& s) {
  Json g = Json::array();
  for (auto const& x : s.g) {
    g.push_back(to_string(x));
  }
  return Json{{"type", "series"}, {"kind", s.kind == SeriesKind::group ? "group" : "monoid"},
              {"r", s.r}, {"g", g}};
}

inline GrowthSeries series_from_json(Json const& j) {
  GrowthSeries s;
  auto const   kind = detail::field<std::string>(j, "kind");
  if (kind != "group" && kind != "monoid") {
    throw contract_error("series kind must be group or monoid");
  }
  s.kind = kind == "group" ? SeriesKind::group : SeriesKind::monoid;
  s.r    = detail::field<int>(j, "r");
  for (auto const& x : detail::field<Json>(j, "g")) {
    s.g.push_back(x.is_string() ? parse_bigint(x.get<std::string>()) : BigInt(x.get<long long>()));
  }
  return checked(std::move(s));
}

//! Columns n, g, d, alpha; alpha as an exact fraction.
inline std::string series_to_csv(GrowthSeries const& s) {
  std::string out = "n,g,d,alpha\n";
  for (std::size_t n = 0; n < s.size(); ++n) {
    out += std::to_string(n) + "," + to_string(s.g[n]) + "," + to_string(s.d(n)) + "," +
           to_string(s.alpha(n)) + "\n";
  }
  return out;
}

////////////////////////////////////////////////////////////////////////
// Acts
////////////////////////////////////////////////////////////////////////

inline Json act_to_json(Act const& act) {
  return Json{{"type", "act"},
              {"r", act.r},
              {"generators", act.generators},
              {"radius", act.radius},
              {"next", act.next}};
}

inline Act act_from_json(Json const& j) {
  Act act;
  act.r          = detail::field<int>(j, "r");
  act.generators = detail::field<std::vector<std::size_t>>(j, "generators");
  act.radius     = detail::field<std::size_t>(j, "radius");
  act.next       = detail::field<std::vector<std::vector<std::size_t>>>(j, "next");
  act.validate();
  return act;
}

////////////////////////////////////////////////////////////////////////
// Tower plans
////////////////////////////////////////////////////////////////////////

//! [{"kind": "power", "g": "a b"}, {"kind": "link", "from": [...], "to": [...]}]
inline std::vector<TowerRequest> plan_from_json(Json const& j) {
  if (!j.is_array()) {
    throw contract_error("plan must be a JSON array");
  }
  std::vector<TowerRequest> plan;
  for (auto const& step : j) {
    auto const   kind = detail::field<std::string>(step, "kind");
    TowerRequest req;
    if (kind == "power") {
      req.kind = StepKind::power_adjoin;
      req.g    = detail::word_field(detail::field<Json>(step, "g"));
    } else if (kind == "link") {
      req.kind = StepKind::tuple_link;
      for (auto const& w : detail::field<Json>(step, "from")) {
        req.from.push_back(detail::word_field(w));
      }
      for (auto const& w : detail::field<Json>(step, "to")) {
        req.to.push_back(detail::word_field(w));
      }
    } else {
      throw contract_error("plan step kind must be power or link, got " + kind);
    }
    plan.push_back(std::move(req));
  }
  return plan;
}

inline Json plan_to_json(std::vector<TowerRequest> const& plan) {
  Json out = Json::array();
  for (auto const& req : plan) {
    if (req.kind == StepKind::power_adjoin) {
      out.push_back({{"kind", "power"}, {"g", format_word(req.g)}});
    } else {
      Json from = Json::array(), to = Json::array();
      for (auto const& w : req.from) {
        from.push_back(format_word(w));
      }
      for (auto const& w : req.to) {
        to.push_back(format_word(w));
      }
      out.push_back({{"kind", "link"}, {"from", from}, {"to", to}});
    }
  }
  return out;
}

//! One JSON object per line: step, kind, n_or_b, deficit_before, deficit_after, epsilon.
inline std::string tower_to_jsonl(TowerResult const& t) {
  std::string out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    auto const& s     = t.steps[i];
    bool const  power = s.kind == StepKind::power_adjoin;
    Json        line{{"step", i + 1},
                     {"kind", power ? "power" : "link"},
                     {"n_or_b", power ? Json(s.n) : Json(format_word(s.b))},
                     {"deficit_before", to_string(s.deficit_before)},
                     {"deficit_after", to_string(s.deficit_after)},
                     {"epsilon", to_string(s.epsilon)}};
    out += line.dump() + "\n";
  }
  return out;
}

////////////////////////////////////////////////////////////////////////
// Polynomials in non-commuting variables
////////////////////////////////////////////////////////////////////////

//! Parses "2*a b - 1/2*b + 3": terms are [coefficient*]word or a bare
//! coefficient; letters must be positive.
inline Poly parse_poly(std::string const& text, int r) {
  Poly        p{r, {}};
  std::size_t i = 0;
  auto        skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
  };
  skip();
  if (i == text.size()) {
    return p;
  }
  bool first = true;
  while (i < text.size()) {
    skip();
    int sign = 1;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
    } else if (!first) {
      throw contract_error("expected + or - in polynomial: " + text);
    }
    first           = false;
    std::size_t end = text.find_first_of("+-", i);
    std::string term = text.substr(i, end == std::string::npos ? std::string::npos : end - i);
    i                = end == std::string::npos ? text.size() : end;
    auto star        = term.find('*');
    Rational coeff   = 1;
    std::string body = term;
    if (star != std::string::npos) {
      std::string c = term.substr(0, star);
      c.erase(std::remove_if(c.begin(), c.end(), [](unsigned char ch) { return std::isspace(ch); }),
              c.end());
      coeff = parse_rational(c);
      body  = term.substr(star + 1);
    } else {
      std::string t = term;
      t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char ch) { return std::isspace(ch); }),
              t.end());
      if (t.empty()) {
        throw contract_error("empty term in polynomial: " + text);
      }
      if (t.find_first_not_of("0123456789/.") == std::string::npos && t != "1") {
        p += Poly::constant(Rational(sign) * parse_rational(t), r);
        continue;
      }
    }
    Word w = parse_word(body);
    check_letters(w, r, true);
    p += Poly::monomial(w, r, Rational(sign) * coeff);
  }
  return p;
}

//! Components separated by '|'.
inline FreeElement parse_free_element(std::string const& text, int r) {
  FreeElement f;
  std::size_t start = 0;
  while (true) {
    auto bar = text.find('|', start);
    f.push_back(parse_poly(text.substr(start, bar == std::string::npos ? std::string::npos
                                                                        : bar - start),
                           r));
    if (bar == std::string::npos) {
      break;
    }
    start = bar + 1;
  }
  return f;
}

inline Json rationals_to_json(std::vector<Rational> const& xs) {
  Json out = Json::array();
  for (auto const& x : xs) {
    out.push_back(to_string(x));
  }
  return out;
}

inline Json bigints_to_json(std::vector<BigInt> const& xs) {
  Json out = Json::array();
  for (auto const& x : xs) {
    out.push_back(to_string(x));
  }
  return out;
}

}  // namespace maxgrowth

#endif  // MAXGROWTH_IO_HPP
