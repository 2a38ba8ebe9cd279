#include <catch2/catch_amalgamated.hpp>

#include "rotaryforge/poset.hpp"

using namespace rotary;

namespace {
RotationGroup build(const char* src) {
  return make_rotation_group(parse_presentation(src));
}
}  // namespace

TEST_CASE("P(6,9)_1 poset counts and axioms") {
  RotationGroup R = build("rank 3; orders 6 9; s2 s1^2 = s1^2 s2^4;");
  FacePoset P = build_poset(R);
  CHECK(P.counts_with_bounds() == std::vector<uint64_t>{1, 6, 27, 9, 1});

  ValidationReport v = validate_polytope(P);
  CHECK(v.diamond_ok);
  CHECK(v.connected_ok);
  CHECK(v.flag_adjacency_ok);
  CHECK(v.flag_count == 108);  // 2|G|
}

TEST_CASE("Gamma1 poset has 6 vertices and 6 facets") {
  RotationGroup R = build(
      "rank 4; orders 6 9 6; s2 s1^2 = s1^2 s2^4; s3^2 s2 = s2^4 s3^2;");
  FacePoset P = build_poset(R);
  CHECK(P.counts[0] == 6);
  CHECK(P.counts[3] == 6);

  ValidationReport v = validate_polytope(P);
  CHECK(v.all_ok());
  CHECK(v.flag_count == 648);

  SectionTypeReport s = section_type_report(P);
  CHECK(s.schlafli == std::vector<int>{6, 9, 6});
  CHECK(s.rank3_sections_flat);
}

TEST_CASE("rank-2 groups give polygon lattices") {
  RotationGroup R = build("rank 2; orders 5;");
  FacePoset P = build_poset(R);
  CHECK(P.counts == std::vector<uint32_t>{5, 5});
  ValidationReport v = validate_polytope(P);
  CHECK(v.all_ok());
  CHECK(v.flag_count == 10);
}

TEST_CASE("simplex model is a polytope but is not tight") {
  RotationGroup R = build("rank 3; orders 3 3;");
  FacePoset P = build_poset(R);
  CHECK(P.counts_with_bounds() == std::vector<uint64_t>{1, 4, 6, 4, 1});
  ValidationReport v = validate_polytope(P);
  CHECK(v.all_ok());
  CHECK(v.flag_count == 24);

  SectionTypeReport s = section_type_report(P);
  CHECK(s.schlafli == std::vector<int>{3, 3});
  CHECK_FALSE(s.rank3_sections_flat);
  CHECK_FALSE(s.flat[0][2]);
}

TEST_CASE("tight polyhedra are (0,2)-flat") {
  RotationGroup R = build("rank 3; orders 6 9; s2 s1^2 = s1^2 s2^4;");
  SectionTypeReport s = section_type_report(build_poset(R));
  CHECK(s.schlafli == std::vector<int>{6, 9});
  CHECK(s.flat[0][2]);
  CHECK(s.rank3_sections_flat);
}

TEST_CASE("the {p,2} polyhedron is flat with two facets") {
  RotationGroup R = build("rank 3; orders 5 2;");
  FacePoset P = build_poset(R);
  CHECK(P.counts_with_bounds() == std::vector<uint64_t>{1, 5, 5, 2, 1});
  SectionTypeReport s = section_type_report(P);
  CHECK(s.schlafli == std::vector<int>{5, 2});
  CHECK(s.flat[0][2]);
  CHECK(validate_polytope(P).all_ok());
}

TEST_CASE("hand-built diamond violation is reported, not thrown") {
  // one edge under three squares over two vertices: middles between a
  // vertex and a 2-face number 1, not 2
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> inc(3);
  inc[0] = {{0, 0}, {1, 0}};
  inc[1] = {{0, 0}, {0, 1}, {0, 2}};
  FacePoset P = FacePoset::from_incidences(3, {2, 1, 3}, inc);
  ValidationReport v = validate_polytope(P);
  CHECK_FALSE(v.diamond_ok);
  CHECK_FALSE(v.failures.empty());
}

TEST_CASE("flag count equals twice the group order across catalogue samples") {
  const char* sources[] = {
      "rank 3; orders 6 9; s2 s1^2 = s1^2 s2^7;",
      "rank 3; orders 3 6; s2^2 s1 = s1 s2^2;",
      "rank 4; orders 3 6 9; s2^2 s1 = s1 s2^2; s3 s2^2 = s2^2 s3^4;",
  };
  for (const char* src : sources) {
    RotationGroup R = build(src);
    ValidationReport v = validate_polytope(build_poset(R));
    CHECK(v.all_ok());
    CHECK(v.flag_count == 2 * group_order(R));
  }
}

TEST_CASE("poset cap throws for oversized groups") {
  RotationGroup R = build("rank 3; orders 6 9; s2 s1^2 = s1^2 s2^4;");
  CHECK_THROWS_AS(build_poset(R, 10), cap_exceeded);
}
