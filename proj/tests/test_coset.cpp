#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "rotaryforge/coset.hpp"
#include "rotaryforge/perm.hpp"

using namespace rotary;

namespace {
const char* kP69 = "rank 3; orders 6 9; s2 s1^2 = s1^2 s2^4;";
}

TEST_CASE("[3,3]+ has 12 cosets over the trivial subgroup") {
  // Oracle: (0 1 2) and (1 2 3) satisfy the relators, and their closure
  // has 12 elements, so the presented group has order at least 12.
  Perm a = Perm::parse_cycles("(0 1 2)", 4);
  Perm b = Perm::parse_cycles("(1 2 3)", 4);
  CHECK((a * a * a).is_identity());
  CHECK((b * b * b).is_identity());
  CHECK(((a * b) * (a * b)).is_identity());
  CHECK(oracle::closure({a, b}).size() == 12);

  Presentation p = parse_presentation("rank 3; orders 3 3;");
  CosetTable t = coset_enumerate(p, {}, 100);
  CHECK(t.coset_count == 12);

  auto imgs = perm_images(t);
  REQUIRE(imgs.size() == 2);
  CHECK(imgs[0].degree() == 12);
  CHECK(imgs[0].order() == 3);
  CHECK(imgs[1].order() == 3);
  CHECK(oracle::closure(imgs).size() == 12);
}

TEST_CASE("P(6,9)_1 closes at 54") {
  Presentation p = parse_presentation(kP69);
  CosetTable t = coset_enumerate(p, {}, 500);
  CHECK(t.coset_count == 54);

  // Tight normal-form oracle: the 6*9 box covers the group and is closed.
  auto imgs = perm_images(t);
  auto box = oracle::normal_form_box(imgs, {6, 9});
  CHECK(box.size() == 54);
  for (const Perm& e : box)
    for (const Perm& g : imgs) CHECK(box.count(e * g) == 1);
}

TEST_CASE("P(6,9)_1 over <s1> has 9 cosets and degree-9 images") {
  Presentation p = parse_presentation(kP69);
  CosetTable t = coset_enumerate(p, {Word({1})}, 500);
  CHECK(t.coset_count == 9);
  auto imgs = perm_images(t);
  REQUIRE(imgs.size() == 2);
  CHECK(imgs[0].degree() == 9);
}

TEST_CASE("enumeration over the whole group gives the trivial table") {
  Presentation p = parse_presentation(kP69);
  CosetTable t = coset_enumerate(p, {Word({1}), Word({2})}, 500);
  CHECK(t.coset_count == 1);
  for (const Perm& g : perm_images(t)) CHECK(g.is_identity());
}

TEST_CASE("every relator fixes every coset of every complete table") {
  const char* sources[] = {
      "rank 3; orders 3 3;",
      kP69,
      "rank 3; orders 4 3;",
      "rank 4; orders 6 9 6; s2 s1^2 = s1^2 s2^4; s3^2 s2 = s2^4 s3^2;",
      "rank 3; orders 5 2;",
  };
  for (const char* src : sources) {
    Presentation p = parse_presentation(src);
    CosetTable t = coset_enumerate(p, {});
    for (const Word& r : p.all_relators())
      for (uint32_t c = 0; c < t.coset_count; ++c)
        CHECK(t.apply(c, r) == c);
    // row/column consistency
    for (uint32_t c = 0; c < t.coset_count; ++c)
      for (int l = 0; l < t.nletters; ++l)
        CHECK(t.at(t.at(c, l), inv_letter(l)) == c);
  }
}

TEST_CASE("subgroup generators fix coset zero") {
  Presentation p = parse_presentation(kP69);
  std::vector<Word> sub{Word({1})};
  CosetTable t = coset_enumerate(p, sub, 500);
  for (const Word& w : sub) CHECK(t.apply(0, w) == 0);
}

TEST_CASE("identical inputs give byte-identical tables") {
  Presentation p = parse_presentation(kP69);
  CosetTable a = coset_enumerate(p, {}, 500);
  CosetTable b = coset_enumerate(p, {}, 500);
  CHECK(a == b);
}

TEST_CASE("cosets are numbered in breadth-first discovery order") {
  Presentation p = parse_presentation(kP69);
  CosetTable t = coset_enumerate(p, {}, 500);
  // BFS over letters in index order can only discover coset n from some
  // coset < n.
  std::vector<uint32_t> first_seen(t.coset_count, 0xFFFFFFFFu);
  first_seen[0] = 0;
  uint32_t next = 1;
  for (uint32_t c = 0; c < t.coset_count; ++c)
    for (int l = 0; l < t.nletters; ++l) {
      uint32_t d = t.at(c, l);
      if (first_seen[d] == 0xFFFFFFFFu) {
        CHECK(d == next);
        first_seen[d] = next++;
      }
    }
  CHECK(next == t.coset_count);
}

TEST_CASE("cap exceeded throws rather than truncating") {
  Presentation p = parse_presentation(kP69);
  CHECK_THROWS_AS(coset_enumerate(p, {}, 10), cap_exceeded);
}

TEST_CASE("lambda4-style presentation collapses sigma2") {
  // [4,32,8]^+ with the two extra relations; sigma2 cannot keep order 32.
  Presentation p = parse_presentation(
      "rank 4; orders 4 32 8; s2^-1 s1 = s1^-1 s2^17; s2 s3^2 = s3^2 s2^9;");
  CosetTable t = coset_enumerate(p, {}, 5000);
  CHECK(t.coset_count < 1024);
  auto imgs = perm_images(t);
  CHECK(imgs[1].order() <= 16);
}

TEST_CASE("incomplete-table guard on perm_images") {
  CosetTable t;
  t.complete = false;
  CHECK_THROWS_AS(perm_images(t), incomplete_table);
}
