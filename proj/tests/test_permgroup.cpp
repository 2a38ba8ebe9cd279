#include <algorithm>
#include <catch2/catch_amalgamated.hpp>
#include <random>
#include <set>

#include "oracles.hpp"
#include "rotaryforge/coset.hpp"
#include "rotaryforge/permgroup.hpp"

using namespace rotary;

namespace {

std::vector<Perm> p69_images() {
  Presentation p = parse_presentation("rank 3; orders 6 9; s2 s1^2 = s1^2 s2^4;");
  return perm_images(coset_enumerate(p, {}, 500));
}

std::vector<Perm> a4_images() {
  Presentation p = parse_presentation("rank 3; orders 3 3;");
  return perm_images(coset_enumerate(p, {}, 100));
}

}  // namespace

TEST_CASE("perm arithmetic basics") {
  Perm a = Perm::parse_cycles("(0 3 5)(1 2)", 6);
  CHECK(a.cycles() == "(0 3 5)(1 2)");
  CHECK(Perm::parse_cycles(a.cycles(), 6) == a);
  CHECK(a.order() == 6);
  CHECK((a * a.inverse()).is_identity());
  CHECK(a.pow(3) == a * a * a);
  CHECK(a.pow(-1) == a.inverse());
  CHECK(Perm(4).cycles() == "()");
  CHECK_THROWS_AS(Perm(std::vector<uint32_t>{0, 0, 1}), invalid_params);
}

TEST_CASE("group order matches the closure oracle") {
  auto a4 = a4_images();
  CHECK(PermGroup(12, a4).order() == oracle::closure(a4).size());

  auto p69 = p69_images();
  CHECK(PermGroup(54, p69).order() == 54);
  CHECK(oracle::closure(p69).size() == 54);
}

TEST_CASE("trivial generator set has order 1") {
  CHECK(PermGroup(5, {}).order() == 1);
  CHECK(PermGroup(5, {Perm(5)}).order() == 1);
}

TEST_CASE("faithful action of P(6,9)_1 on cosets of <s1>") {
  Presentation p = parse_presentation("rank 3; orders 6 9; s2 s1^2 = s1^2 s2^4;");
  auto imgs = perm_images(coset_enumerate(p, {Word({1})}, 500));
  CHECK(PermGroup(9, imgs).order() == 54);
}

TEST_CASE("membership by sifting") {
  auto p69 = p69_images();
  PermGroup G(54, p69);
  CHECK(G.contains(Perm(54)));
  CHECK(G.contains(p69[0] * p69[1] * p69[0]));

  // sigma2 is not a power of sigma1
  PermGroup S1(54, {p69[0]});
  CHECK_FALSE(S1.contains(p69[1]));
  CHECK(S1.contains(p69[0].pow(4)));
}

TEST_CASE("membership agrees with element-set lookup, randomized") {
  auto p69 = p69_images();
  PermGroup S(54, {p69[0], p69[1] * p69[1] * p69[1]});
  auto elems = oracle::closure({p69[0], p69[1].pow(3)});
  std::set<Perm> set(elems.begin(), elems.end());
  auto all = oracle::closure(p69);
  std::mt19937 rng(7);
  std::vector<Perm> pool(all.begin(), all.end());
  for (int i = 0; i < 200; ++i) {
    const Perm& g = pool[rng() % pool.size()];
    CHECK(S.contains(g) == (set.count(g) == 1));
  }
}

TEST_CASE("subgroup_elements closure and caps") {
  auto p69 = p69_images();
  CHECK(subgroup_elements({p69[1]}).size() == 9);
  CHECK(subgroup_elements({}, 10).size() == 1);
  CHECK_THROWS_AS(subgroup_elements({p69[0], p69[1]}, 10), cap_exceeded);
}

TEST_CASE("intersection of cyclic subgroups of P(6,9)_1 is trivial") {
  auto p69 = p69_images();
  auto A = subgroup_elements({p69[0]});
  auto I = intersection(A, PermGroup(54, {p69[1]}));
  REQUIRE(I.size() == 1);
  CHECK(I[0].is_identity());

  auto back = intersection(A, PermGroup(54, {p69[0]}));
  CHECK(back.size() == A.size());
}

TEST_CASE("normal closure examples") {
  auto p69 = p69_images();
  PermGroup G(54, p69);

  auto x = normal_closure(G, {p69[1].pow(3)});
  CHECK(x.size() == 3);
  auto expect = oracle::naive_normal_closure(p69, {p69[1].pow(3)});
  CHECK(std::set<Perm>(x.begin(), x.end()) == expect);

  auto trivial = normal_closure(G, {Perm(54)});
  CHECK(trivial.size() == 1);

  auto a4 = a4_images();
  PermGroup A(12, a4);
  CHECK(normal_closure(A, {a4[0]}).size() == 12);
}

TEST_CASE("normal closure output is closed under conjugation") {
  auto p69 = p69_images();
  PermGroup G(54, p69);
  auto x = normal_closure(G, {p69[1].pow(3)});
  std::set<Perm> set(x.begin(), x.end());
  for (const Perm& e : x)
    for (const Perm& g : G.generators())
      CHECK(set.count(g.inverse() * e * g) == 1);
}

TEST_CASE("cyclic core scans divisor subgroups from the top") {
  auto p69 = p69_images();
  PermGroup G(54, p69);

  auto core2 = cyclic_core(G, p69[1]);
  CHECK(core2.size() >= 3);
  std::set<Perm> set(core2.begin(), core2.end());
  CHECK(set.count(p69[1].pow(3)) == 1);
  for (const Perm& e : core2) {
    CHECK(PermGroup(54, {p69[1]}).contains(e));
    for (const Perm& g : G.generators()) CHECK(set.count(g.inverse() * e * g) == 1);
  }

  auto self = cyclic_core(PermGroup(54, {p69[1]}), p69[1]);
  CHECK(self.size() == 9);
}

TEST_CASE("hom_extends on identity assignment and the left form") {
  Presentation p69 = parse_presentation("rank 3; orders 6 9; s2 s1^2 = s1^2 s2^4;");
  auto imgs = p69_images();
  CHECK(hom_extends(p69, imgs));

  // enantiomorph generators: s1^{-1}, s1^2 s2
  std::vector<Perm> mirror{imgs[0].inverse(), imgs[0] * imgs[0] * imgs[1]};
  CHECK_FALSE(hom_extends(p69, mirror));

  Presentation reg36 = parse_presentation("rank 3; orders 3 6; s2^2 s1 = s1 s2^2;");
  auto r = perm_images(coset_enumerate(reg36, {}, 200));
  CHECK(r[0].degree() == 18);
  std::vector<Perm> rmirror{r[0].inverse(), r[0] * r[0] * r[1]};
  CHECK(hom_extends(reg36, rmirror));

  CHECK_THROWS_AS(hom_extends(p69, {imgs[0]}), arity_mismatch);
}

TEST_CASE("hom_extends is invariant under free reduction") {
  auto imgs = p69_images();
  // same relator with and without a cancelling pair spliced in
  Word plain({2, 1, 1, -2, -2, -2, -2, -1, -1});
  std::vector<Letter> padded{2, 1, -1, 1, 1, -2, -2, -2, -2, -1, -1};
  Presentation a(3, {6, 9}, {plain});
  Presentation b(3, {6, 9}, {Word(padded)});
  CHECK(hom_extends(a, imgs) == hom_extends(b, imgs));
}

TEST_CASE("direct product pairings") {
  auto p69 = p69_images();
  PermGroup G(54, p69);
  PermGroup T(1, {});

  std::vector<std::pair<Perm, Perm>> diag;
  for (const Perm& g : p69) diag.push_back({g, g});
  CHECK(direct_product(G, G, diag).order() == 54);

  std::vector<std::pair<Perm, Perm>> with_trivial;
  for (const Perm& g : p69) with_trivial.push_back({g, Perm(1)});
  CHECK(direct_product(G, T, with_trivial).order() == 54);

  // mix with the enantiomorph: order 54 * |X| = 162
  std::vector<Perm> mirror{p69[0].inverse(), p69[0] * p69[0] * p69[1]};
  std::vector<std::pair<Perm, Perm>> mixp;
  for (int i = 0; i < 2; ++i) mixp.push_back({p69[i], mirror[i]});
  CHECK(direct_product(G, G, mixp).order() == 162);

  CHECK_THROWS_AS(direct_product(G, G, {}), invalid_params);
}

TEST_CASE("verified order bound short-circuits chain building") {
  auto p69 = p69_images();
  PermGroup G(54, p69);
  G.set_verified_order_bound(54);
  CHECK(G.order() == 54);
  CHECK(G.contains(p69[0] * p69[1]));
}
