// maxgrowth: command-line front end for the subgroup, act and module tools.
//
// Exit codes: 0 success, 2 bad input, 3 work budget exceeded,
// 4 internal check failed.

#include <CLI11.hpp>

#include <functional>
#include <memory>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "maxgrowth/acts.hpp"
#include "maxgrowth/coset_growth.hpp"
#include "maxgrowth/io.hpp"
#include "maxgrowth/linmod.hpp"
#include "maxgrowth/quasi_monomial.hpp"
#include "maxgrowth/stallings.hpp"
#include "maxgrowth/surgery.hpp"
#include "maxgrowth/words.hpp"

using namespace maxgrowth;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string   out;
  std::string   format;  // empty: command default
};

//! What a command produced, in every format it supports.
struct Output {
  Json        json;
  std::string text;
  std::string csv;  // empty when csv is not meaningful
};

std::string pick_format(Globals const& g, std::string const& fallback) {
  return g.format.empty() ? fallback : g.format;
}

void emit(Globals const& g, Output const& o, std::string const& fallback = "json") {
  auto const fmt = pick_format(g, fallback);
  if (fmt == "json") {
    write_text(g.out, o.json.dump(2) + "\n");
  } else if (fmt == "text") {
    write_text(g.out, o.text);
  } else {
    if (o.csv.empty()) {
      throw contract_error("csv output is not available for this command");
    }
    write_text(g.out, o.csv);
  }
}

Output series_output(GrowthSeries const& s) {
  std::string text;
  for (std::size_t n = 0; n < s.size(); ++n) {
    text += "g(" + std::to_string(n) + ") = " + to_string(s.g[n]) + "\n";
  }
  return {series_to_json(s), text, series_to_csv(s)};
}

std::vector<Word> parse_words(std::vector<std::string> const& texts) {
  std::vector<Word> out;
  for (auto const& t : texts) {
    out.push_back(parse_word(t));
  }
  return out;
}

CoreAutomaton load_core(std::string const& path) {
  return core_from_json(read_json(path));
}

std::string words_text(std::vector<Word> const& ws) {
  std::string out;
  for (auto const& w : ws) {
    out += (w.empty() ? std::string("1") : format_word(w)) + "\n";
  }
  return out;
}

Json words_json(std::vector<Word> const& ws) {
  Json out = Json::array();
  for (auto const& w : ws) {
    out.push_back(format_word(w));
  }
  return out;
}

std::vector<std::uint64_t> parse_u64_list(std::string const& text) {
  std::vector<std::uint64_t> out;
  std::stringstream          ss(text);
  std::string                item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) {
      continue;
    }
    auto v = parse_bigint(item);
    if (v < 0) {
      throw contract_error("negative entry in list: " + text);
    }
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::vector<std::size_t> parse_size_list(std::string const& text) {
  auto                     raw = parse_u64_list(text);
  std::vector<std::size_t> out(raw.begin(), raw.end());
  return out;
}

//! d_j = j + 1 for j = 1..count, the default for module examples.
std::vector<std::size_t> shifted_degrees(std::size_t count) {
  std::vector<std::size_t> d;
  for (std::size_t j = 1; j <= count; ++j) {
    d.push_back(j + 1);
  }
  return d;
}

using Action = std::function<void()>;

void on_run(CLI::App* cmd, Action action, std::vector<Action>& actions) {
  actions.push_back(std::move(action));
  std::size_t const id = actions.size() - 1;
  cmd->callback([&actions, id] { actions[id](); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growth of subgroups, acts and modules over free objects"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->default_val(1);
  app.add_option("--out", g.out, "Output file (default: standard output)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));

  std::vector<Action> actions;
  actions.reserve(64);

  // Per-command option storage, so each command keeps its own defaults.
  struct Opts {
    int                      r = 2;
    std::size_t              N = 10, s_rank = 1, budget = 4096, depth = 12, l = 8, samples = 1000;
    std::vector<std::string> gens, from, to, vlist;
    std::string              file, word, eps_text = "1/100", kind, d_text, c_text, C_text, plan_file;
    std::size_t              at = 0, to_vertex = no_vertex;
    bool                     inverse_flag = false;
    std::string              method = "closed";
    std::string              mode   = "group";
  };
  std::shared_ptr<Opts> o;

  // core
  auto* core = app.add_subcommand("core", "Subgroup cores")->require_subcommand(1);
  {
    o = std::make_shared<Opts>();
    auto* c = core->add_subcommand("build", "Fold generators into a core");
    c->add_option("-g,--generator", o->gens, "Generator word (repeatable)");
    c->add_option("-r,--rank", o->r, "Rank of the free group")->default_val(2);
    on_run(c, [&, o] {
      auto k = build_core(parse_words(o->gens), o->r);
      auto j = core_to_json(k);
      emit(g, {j, "vertices " + std::to_string(k.size()) + "\ndeficit " +
                      to_string(deficit(k).total) + "\n"});
    }, actions);

    o = std::make_shared<Opts>();

    c = core->add_subcommand("info", "Summary of a core");
    c->add_option("core", o->file, "Core JSON")->required();
    on_run(c, [&, o] {
      auto k   = load_core(o->file);
      auto idx = index(k);
      Json j{{"r", k.alphabet_rank()},
             {"vertices", k.size()},
             {"rank", subgroup_rank(k)},
             {"radius", k.radius()},
             {"index", idx ? Json(*idx) : Json(nullptr)},
             {"deficit", to_string(deficit(k).total)}};
      std::string text = "r " + std::to_string(k.alphabet_rank()) + "\nvertices " +
                         std::to_string(k.size()) + "\nrank " + std::to_string(subgroup_rank(k)) +
                         "\nradius " + std::to_string(k.radius()) + "\nindex " +
                         (idx ? std::to_string(*idx) : std::string("infinite")) + "\ndeficit " +
                         to_string(deficit(k).total) + "\n";
      emit(g, {j, text}, "text");
    }, actions);

    o = std::make_shared<Opts>();

    c = core->add_subcommand("basis", "Free basis from the geodesic spanning tree");
    c->add_option("core", o->file, "Core JSON")->required();
    on_run(c, [&, o] {
      auto b = schreier_basis(load_core(o->file)).basis;
      emit(g, {words_json(b), words_text(b)}, "text");
    }, actions);

    o = std::make_shared<Opts>();

    c = core->add_subcommand("deficit", "Deficit and its per-vertex terms");
    c->add_option("core", o->file, "Core JSON")->required();
    on_run(c, [&, o] {
      auto k = load_core(o->file);
      auto d = deficit(k);
      Json per = Json::array();
      std::string csv = "vertex,distance,missing\n";
      for (std::size_t v = 0; v < k.size(); ++v) {
        per.push_back({{"vertex", v}, {"distance", d.distance[v]}, {"missing", d.per_vertex[v]}});
        csv += std::to_string(v) + "," + std::to_string(d.distance[v]) + "," +
               std::to_string(d.per_vertex[v]) + "\n";
      }
      emit(g, {Json{{"deficit", to_string(d.total)}, {"vertices", per}}, to_string(d.total) + "\n", csv},
           "text");
    }, actions);
  }

  // growth
  auto* growth = app.add_subcommand("growth", "Growth of H-cosets")->require_subcommand(1);
  {
    o = std::make_shared<Opts>();
    auto* c = growth->add_subcommand("series", "Coset growth g(0..N)");
    c->add_option("core", o->file, "Core JSON")->required();
    c->add_option("-N", o->N, "Radius")->default_val(10);
    c->add_option("--method", o->method, "closed or bfs")->check(CLI::IsMember({"closed", "bfs"}));
    on_run(c, [&, o] {
      auto s = growth_series(load_core(o->file), o->N,
                             o->method == "bfs" ? GrowthMethod::bfs : GrowthMethod::closed_form);
      emit(g, series_output(s));
    }, actions);

    o = std::make_shared<Opts>();

    c = growth->add_subcommand("classify", "Is the coset growth maximal?");
    c->add_option("core", o->file, "Core JSON")->required();
    c->add_option("-N", o->N, "Check the certificate for 1 <= n <= N")->default_val(12);
    on_run(c, [&, o] {
      auto v = classify(load_core(o->file), o->N);
      Json j{{"maximal", v.maximal},
             {"c", to_string(v.certificate)},
             {"checked_to", o->N},
             {"inequality_holds", v.inequality_holds},
             {"alpha_tail", rationals_to_json(v.alpha_tail)}};
      std::string text = std::string("maximal=") + (v.maximal ? "true" : "false") +
                         " c=" + to_string(v.certificate) + "\n";
      emit(g, {j, text}, "text");
    }, actions);

    o = std::make_shared<Opts>();

    c = growth->add_subcommand("measure", "Boundary measure upper bounds u(0..N)");
    c->add_option("core", o->file, "Core JSON")->required();
    c->add_option("-N", o->N, "Depth")->default_val(10);
    on_run(c, [&, o] {
      auto        u = boundary_measure_bounds(load_core(o->file), o->N);
      std::string text, csv = "n,u\n";
      for (std::size_t n = 0; n < u.size(); ++n) {
        text += "u(" + std::to_string(n) + ") = " + to_string(u[n]) + "\n";
        csv += std::to_string(n) + "," + to_string(u[n]) + "\n";
      }
      emit(g, {Json{{"u", rationals_to_json(u)}}, text, csv});
    }, actions);
  }

  // surgery
  auto* surgery = app.add_subcommand("surgery", "Enlarging subgroups")->require_subcommand(1);
  {
    o = std::make_shared<Opts>();
    auto* c = surgery->add_subcommand("attach", "Attach a cycle, a cycle with a leg, or an arc");
    c->add_option("core", o->file, "Core JSON")->required();
    c->add_option("--kind", o->kind, "cycle, leg or arc")->required()->check(
        CLI::IsMember({"cycle", "leg", "arc"}));
    c->add_option("--label", o->word, "Label of the attached path")->required();
    c->add_option("--at", o->at, "Start vertex")->default_val(0);
    c->add_option("--to", o->to_vertex, "End vertex of an arc");
    on_run(c, [&, o] {
      ElementarySpec spec;
      spec.kind  = o->kind == "cycle" ? ElementaryKind::cycle
                   : o->kind == "leg" ? ElementaryKind::cycle_with_leg
                                   : ElementaryKind::arc;
      spec.label = parse_word(o->word);
      spec.at    = o->at;
      spec.to    = o->to_vertex;
      auto res   = attach_elementary(load_core(o->file), spec);
      Json j{{"core", core_to_json(res.core)},
             {"delta", to_string(res.delta)},
             {"generator", format_word(res.generator)}};
      emit(g, {j, "delta " + to_string(res.delta) + "\ngenerator " + format_word(res.generator) + "\n"});
    }, actions);

    o = std::make_shared<Opts>();

    c = surgery->add_subcommand("adjoin-power", "Adjoin a power of g with small deficit loss");
    c->add_option("core", o->file, "Core JSON")->required();
    c->add_option("-g", o->word, "Element g")->required();
    c->add_option("--epsilon", o->eps_text, "Allowed deficit loss")->default_val("1/100");
    on_run(c, [&, o] {
      auto res = adjoin_power(load_core(o->file), parse_word(o->word), parse_rational(o->eps_text));
      Json j{{"core", core_to_json(res.core)},
             {"n", res.n},
             {"drop", to_string(res.drop)},
             {"deficit", to_string(deficit(res.core).total)}};
      emit(g, {j, "n " + std::to_string(res.n) + "\ndrop " + to_string(res.drop) + "\n"});
    }, actions);

    o = std::make_shared<Opts>();

    c = surgery->add_subcommand("link", "Find b with H1 g_i b = H1 g'_i");
    c->add_option("core", o->file, "Core JSON")->required();
    c->add_option("--from", o->from, "Words g_i")->required();
    c->add_option("--to", o->to, "Words g'_i")->required();
    c->add_option("--epsilon", o->eps_text, "Allowed deficit loss")->default_val("1/100");
    on_run(c, [&, o] {
      auto res = link_tuples(load_core(o->file), parse_words(o->from), parse_words(o->to),
                             parse_rational(o->eps_text), g.seed);
      Json j{{"core", core_to_json(res.core)},
             {"b", format_word(res.b)},
             {"drop", to_string(res.drop)},
             {"attempts", res.attempts}};
      emit(g, {j, "b " + format_word(res.b) + "\ndrop " + to_string(res.drop) + "\n"});
    }, actions);

    o = std::make_shared<Opts>();

    c = surgery->add_subcommand("tower", "Run a plan of steps; one JSON line per step");
    c->add_option("core", o->file, "Core JSON")->required();
    c->add_option("--plan", o->plan_file, "Plan JSON")->required();
    on_run(c, [&, o] {
      auto res = tower(load_core(o->file), plan_from_json(read_json(o->plan_file)), g.seed);
      write_text(g.out, tower_to_jsonl(res));
      if (!res.complete()) {
        throw budget_exceeded("tower stopped: " + res.error);
      }
    }, actions);

    o = std::make_shared<Opts>();

    c = surgery->add_subcommand("basis-change", "Ball growth of an action in two bases");
    c->add_option("-r,--rank", o->r, "Rank")->default_val(2);
    c->add_option("--epsilon", o->eps_text, "Frequency tolerance")->default_val("1/4");
    c->add_option("-l", o->l, "Window start")->default_val(8);
    c->add_option("--depth", o->depth, "Depth")->default_val(12);
    on_run(c, [&, o] {
      auto res = basis_change_experiment(o->r, ZParams{parse_rational(o->eps_text), o->l}, o->depth);
      Json z   = Json::array();
      std::string text, csv = "n,g_a,g_b,z\n";
      for (std::size_t n = 0; n < res.z_counts.size(); ++n) {
        z.push_back(res.z_counts[n]);
      }
      for (std::size_t n = 0; n < res.series_a.size(); ++n) {
        std::string gb = n < res.series_b.size() ? to_string(res.series_b.g[n]) : "";
        csv += std::to_string(n) + "," + to_string(res.series_a.g[n]) + "," + gb + "," +
               std::to_string(n < res.z_counts.size() ? res.z_counts[n] : 0) + "\n";
        text += "n=" + std::to_string(n) + " a=" + to_string(res.series_a.g[n]) +
                (gb.empty() ? "" : " b=" + gb) + "\n";
      }
      Json j{{"series_a", series_to_json(res.series_a)},
             {"series_b", series_to_json(res.series_b)},
             {"exact_radius_b", res.exact_radius_b},
             {"z_counts", z}};
      emit(g, {j, text, csv});
    }, actions);
  }

  // act
  auto* act = app.add_subcommand("act", "Acts of free monoids")->require_subcommand(1);
  {
    o = std::make_shared<Opts>();
    auto* c = act->add_subcommand("prescribed", "Act with prescribed sphere sizes");
    c->add_option("-r,--rank", o->r, "Rank")->default_val(2);
    c->add_option("-d", o->d_text, "Sphere sizes d(0),d(1),...")->required();
    on_run(c, [&, o] {
      auto a = build_prescribed(parse_u64_list(o->d_text), o->r);
      emit(g, {act_to_json(a), "states " + std::to_string(a.size()) + "\n"});
    }, actions);

    o = std::make_shared<Opts>();

    c = act->add_subcommand("growth", "Ball sizes of an act from JSON");
    c->add_option("act", o->file, "Act JSON")->required();
    c->add_option("-N", o->N, "Radius")->default_val(10);
    on_run(c, [&, o] { emit(g, series_output(act_growth(act_from_json(read_json(o->file)), o->N))); }, actions);

    o = std::make_shared<Opts>();

    c = act->add_subcommand("ktrans", "Truncated k-transitive act: growth or a tuple");
    c->add_option("-r,--rank", o->r, "Rank")->default_val(2);
    c->add_option("--budget", o->budget, "Number of tuples enumerated")->default_val(4096);
    c->add_option("-N", o->N, "Radius")->default_val(10);
    auto* tuple_opt = c->add_option("--tuple", o->at, "Show tuple i and check its witness");
    on_run(c, [&, o, tuple_opt] {
      KTransitiveAct k(o->r, o->budget);
      if (tuple_opt->count() > 0) {
        auto const& tu = k.tuple(o->at);
        bool        ok = k.witness(o->at);
        Json j{{"i", o->at},
               {"from", words_json(tu.from)},
               {"to", words_json(tu.to)},
               {"marker", format_word(k.marker(o->at))},
               {"witness", ok}};
        emit(g, {j, "from " + words_json(tu.from).dump() + "\nto " + words_json(tu.to).dump() +
                        "\nwitness " + (ok ? "true" : "false") + "\n"});
        return;
      }
      emit(g, series_output(k.growth(o->N)));
    }, actions);
  }

  // module
  auto* module = app.add_subcommand("module", "Modules over free associative algebras")->require_subcommand(1);
  {
    o = std::make_shared<Opts>();
    auto* c = module->add_subcommand("growth", "Growth of a free module of rank s");
    c->add_option("-r,--rank", o->r, "Number of variables")->default_val(2);
    c->add_option("-s", o->s_rank, "Module rank")->default_val(1);
    c->add_option("-N", o->N, "Radius")->default_val(6);
    on_run(c, [&, o] {
      auto              M = free_module(o->r, o->s_rank);
      std::vector<SparseVec> basis;
      for (std::size_t i = 0; i < o->s_rank; ++i) {
        basis.push_back(M.vec({'a', static_cast<std::int64_t>(i), {}}));
      }
      emit(g, series_output(module_growth(M, basis, o->N)));
    }, actions);

    o = std::make_shared<Opts>();

    c = module->add_subcommand("example", "Growth of the cyclic extension examples");
    c->add_option("--kind", o->kind, "linear or nonil")->required()->check(CLI::IsMember({"linear", "nonil"}));
    c->add_option("-r,--rank", o->r, "Number of variables")->default_val(2);
    c->add_option("-d", o->d_text, "Sequence d_1,d_2,... (default 2,4,6,...)");
    c->add_option("-N", o->N, "Radius")->default_val(8);
    on_run(c, [&, o] {
      std::vector<std::size_t> d;
      if (o->d_text.empty()) {
        for (std::size_t j = 1; j <= o->N + 4; ++j) {
          d.push_back(2 * j);
        }
      } else {
        d = parse_size_list(o->d_text);
      }
      auto M = build_extension_example(o->kind == "linear" ? ExtensionKind::linear_pieces
                                                        : ExtensionKind::no_nil_quotients,
                                       d, o->r);
      emit(g, series_output(module_growth(M, {M.vec({'e', 1, {}})}, o->N)));
    }, actions);

    o = std::make_shared<Opts>();

    c = module->add_subcommand("cogrowth", "Co-growth of a graded submodule of R^s");
    c->add_option("-r,--rank", o->r, "Number of variables")->default_val(2);
    c->add_option("-s", o->s_rank, "Rank of the free module")->default_val(1);
    c->add_option("--gen", o->gens, "Homogeneous generator, components separated by |");
    c->add_option("-N", o->N, "Radius")->default_val(6);
    on_run(c, [&, o] {
      std::vector<FreeElement> elems;
      for (auto const& t : o->gens) {
        elems.push_back(parse_free_element(t, o->r));
      }
      auto        res = cogrowth(elems, o->r, o->s_rank, o->N);
      std::string text, csv = "n,c,g_free,g_quotient,ratio\n";
      for (std::size_t n = 0; n < res.c.size(); ++n) {
        auto row = std::to_string(n) + "," + to_string(res.c[n]) + "," +
                   to_string(res.free_growth.g[n]) + "," + to_string(res.quotient_growth.g[n]) +
                   "," + to_string(res.ratios[n]);
        csv += row + "\n";
        text += "c(" + std::to_string(n) + ") = " + to_string(res.c[n]) + "\n";
      }
      Json j{{"c", bigints_to_json(res.c)},
             {"free_growth", series_to_json(res.free_growth)},
             {"quotient_growth", series_to_json(res.quotient_growth)},
             {"identity_ok", res.identity_ok},
             {"ratios", rationals_to_json(res.ratios)}};
      emit(g, {j, text, csv});
    }, actions);

    o = std::make_shared<Opts>();

    c = module->add_subcommand("nil-step", "One step towards a nil quotient of R/J");
    c->add_option("-r,--rank", o->r, "Number of variables")->default_val(2);
    c->add_option("--J", o->gens, "Homogeneous generators of J");
    c->add_option("--C", o->C_text, "Growth constant of R/J")->default_val("1");
    c->add_option("--c", o->c_text, "Target constant, 0 < c < C")->default_val("1/2");
    c->add_option("-u", o->word, "Monomial u")->default_val("");
    c->add_option("-v", o->vlist, "Monomials v_i")->required();
    c->add_option("-N", o->N, "Radius")->default_val(10);
    on_run(c, [&, o] {
      std::vector<Poly> J;
      for (auto const& t : o->gens) {
        J.push_back(parse_poly(t, o->r));
      }
      auto res = nil_step(J, parse_rational(o->C_text), parse_word(o->word), parse_words(o->vlist),
                          parse_rational(o->c_text), o->r, o->N, g.seed);
      Json comps = Json::array();
      for (auto const& p : res.components) {
        comps.push_back(p.str());
      }
      Json j{{"q", res.q},
             {"components", comps},
             {"module_growth", series_to_json(res.module_growth)},
             {"quotient_growth", series_to_json(res.quotient_growth)},
             {"growth_ok", res.growth_ok},
             {"spot_checks", res.spot_checks},
             {"spot_ok", res.spot_ok}};
      emit(g, {j, "q " + std::to_string(res.q) + "\ngrowth_ok " + (res.growth_ok ? "true" : "false") +
                      "\nspot_ok " + (res.spot_ok ? "true" : "false") + "\n"});
    }, actions);

    o = std::make_shared<Opts>();

    c = module->add_subcommand("residually-finite", "Residually finite module of maximal growth");
    c->add_option("-d", o->d_text, "Degrees d_1,d_2,... (default 2,3,4,...)");
    c->add_option("--depth", o->depth, "Materialized depth")->default_val(16);
    c->add_option("-N", o->N, "Radius")->default_val(8);
    on_run(c, [&, o] {
      auto d   = o->d_text.empty() ? shifted_degrees(o->depth + 8) : parse_size_list(o->d_text);
      auto M   = build_residually_finite_module(AlphaTable::position(), d, 2, o->depth);
      auto rep = residually_finite_report(M, o->N, g.seed);
      Json j{{"growth", series_to_json(rep.growth)},
             {"exceeds_free", rep.exceeds_free},
             {"bound_ok", rep.bound_ok},
             {"rank_agrees", rep.rank_agrees},
             {"triangular", rep.triangular},
             {"faithful_low_degree", rep.faithful_low_degree},
             {"witnesses", rep.witnesses.size()},
             {"ok", rep.ok()}};
      emit(g, {j, std::string("ok ") + (rep.ok() ? "true" : "false") + "\n"});
    }, actions);
  }

  // words
  auto* words = app.add_subcommand("words", "Word utilities")->require_subcommand(1);
  {
    o = std::make_shared<Opts>();
    auto* c = words->add_subcommand("avoid", "Count words avoiding a subword");
    c->add_option("-u", o->word, "Forbidden subword")->required();
    c->add_option("-n", o->N, "Length")->default_val(10);
    c->add_option("-r,--rank", o->r, "Rank")->default_val(2);
    c->add_option("--mode", o->mode, "group or monoid")->check(CLI::IsMember({"group", "monoid"}));
    on_run(c, [&, o] {
      auto res = count_avoiding(parse_word(o->word), o->N, o->mode == "group" ? WordMode::group : WordMode::monoid, o->r);
      std::string text, csv = "n,sphere,ball\n";
      for (std::size_t n = 0; n < res.sphere.size(); ++n) {
        csv += std::to_string(n) + "," + to_string(res.sphere[n]) + "," + to_string(res.ball[n]) + "\n";
        text += "n=" + std::to_string(n) + " sphere=" + to_string(res.sphere[n]) +
                " ball=" + to_string(res.ball[n]) + "\n";
      }
      emit(g, {Json{{"sphere", bigints_to_json(res.sphere)}, {"ball", bigints_to_json(res.ball)}},
               text, csv});
    }, actions);

    o = std::make_shared<Opts>();

    c = words->add_subcommand("nielsen", "Image under a1 -> a1 a2");
    c->add_option("word", o->word, "Word")->required();
    c->add_flag("--inverse", o->inverse_flag, "Apply the inverse automorphism");
    on_run(c, [&, o] {
      auto w = o->inverse_flag ? apply_nielsen_inverse(parse_word(o->word)) : apply_nielsen(parse_word(o->word));
      emit(g, {Json(format_word(w)), (w.empty() ? std::string("1") : format_word(w)) + "\n"}, "text");
    }, actions);

    o = std::make_shared<Opts>();

    c = words->add_subcommand("zcheck", "Frequency-balance test for a reduced word");
    c->add_option("word", o->word, "Word")->required();
    c->add_option("-r,--rank", o->r, "Rank")->default_val(2);
    c->add_option("--epsilon", o->eps_text, "Tolerance")->default_val("1/4");
    c->add_option("-l", o->l, "Window start")->default_val(8);
    on_run(c, [&, o] {
      bool in = z_membership(parse_word(o->word), ZParams{parse_rational(o->eps_text), o->l}, o->r);
      emit(g, {Json{{"member", in}}, std::string(in ? "true" : "false") + "\n"}, "text");
    }, actions);

    o = std::make_shared<Opts>();

    c = words->add_subcommand("stats", "Fraction of random reduced words passing the balance test");
    c->add_option("-n", o->N, "Length")->default_val(64);
    c->add_option("-r,--rank", o->r, "Rank")->default_val(2);
    c->add_option("--epsilon", o->eps_text, "Tolerance")->default_val("1/4");
    c->add_option("-l", o->l, "Window start")->default_val(8);
    c->add_option("--samples", o->samples, "Sample count")->default_val(1000);
    on_run(c, [&, o] {
      std::mt19937_64 rng(g.seed);
      ZParams const   zp{parse_rational(o->eps_text), o->l};
      std::size_t     pass = 0;
      for (std::size_t i = 0; i < o->samples; ++i) {
        pass += z_membership(sample_reduced(o->N, o->r, rng), zp, o->r) ? 1 : 0;
      }
      Rational frac(static_cast<long long>(pass), static_cast<long long>(std::max<std::size_t>(o->samples, 1)));
      emit(g, {Json{{"samples", o->samples}, {"passed", pass}, {"fraction", to_string(frac)}},
               "passed " + std::to_string(pass) + "/" + std::to_string(o->samples) + "\n"},
           "text");
    }, actions);
  }

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 2;
  } catch (contract_error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (budget_exceeded const& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (std::logic_error const& e) {
    std::cerr << "internal check failed: " << e.what() << "\n";
    return 4;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
