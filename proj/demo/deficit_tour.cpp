// Walks through the deficit of a few subgroups of F_2, how it predicts coset
// growth, and how a tower of enlargements keeps it bounded away from zero.

#include <iostream>

#include "maxgrowth/coset_growth.hpp"
#include "maxgrowth/surgery.hpp"

using namespace maxgrowth;

int main() {
  struct Named {
    char const*       name;
    std::vector<Word> gens;
  };
  std::vector<Named> subgroups{
      {"trivial", {}},
      {"<a>", {{1}}},
      {"<a b a^-1>", {{1, 2, -1}}},
      {"<a^2, b, a b a^-1>", {{1, 1}, {2}, {1, 2, -1}}},
      {"<a, b>", {{1}, {2}}},
  };
  for (auto const& [name, gens] : subgroups) {
    auto core = build_core(gens, 2);
    auto def  = deficit(core).total;
    auto s    = growth_series(core, 8);
    std::cout << name << ": " << core.size() << " vertices, deficit " << to_string(def);
    std::cout << ", g(8) = " << to_string(s.g[8]) << " vs (def/2) 3^8 = " << to_string(def / 2 * 6561)
              << "\n";
  }

  auto base = build_core({{1, 2, -1}}, 2);
  std::vector<TowerRequest> plan{
      {StepKind::power_adjoin, {1}, {}, {}},
      {StepKind::tuple_link, {}, {{}, {1}}, {{1}, {}}},
      {StepKind::power_adjoin, {2, 1}, {}, {}},
  };
  auto t = tower(base, plan, 3);
  std::cout << "\ntower over <a b a^-1>:\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    auto const& st = t.steps[i];
    std::cout << "  step " << i + 1 << (st.kind == StepKind::power_adjoin ? " power n=" : " link |b|=")
              << (st.kind == StepKind::power_adjoin ? st.n : static_cast<long long>(st.b.size()))
              << ", deficit " << to_double(st.deficit_before) << " -> " << to_double(st.deficit_after)
              << " (allowed loss " << to_string(st.epsilon) << ")\n";
  }
  auto v = classify(t.cores.back(), 6);
  std::cout << "top subgroup: rank " << subgroup_rank(t.cores.back())
            << ", maximal growth: " << (v.maximal ? "yes" : "no") << "\n";
  return t.complete() ? 0 : 1;
}
