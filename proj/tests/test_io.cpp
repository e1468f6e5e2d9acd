#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fqdyn/io.hpp"

using namespace fqdyn;

TEST_CASE("field spec grammar") {
    CHECK(parse_field_spec("5", 0)->p() == 5);
    auto f9 = parse_field_spec("3^2", 0);
    CHECK(f9->p() == 3);
    CHECK(f9->m() == 2);
    auto fm = parse_field_spec("5^2:mod=x^2+2", 0);
    CHECK(fm->modulus() == std::vector<int64_t>{2, 0, 1});
    CHECK_THROWS_AS(parse_field_spec("4", 0), Error);
    CHECK_THROWS_AS(parse_field_spec("5^2:mod=x^2+1", 0), Error); // x^2+1 = (x+2)(x+3) mod 5
    CHECK_THROWS_AS(parse_field_spec("5^3:mod=x^2+2", 0), Error); // degree mismatch
    CHECK(format_field_spec(*f9) == "3^2");
    CHECK(format_field_spec(*prime_field(7)) == "7");
}

TEST_CASE("poly grammar round trip") {
    auto f5 = prime_field(5);
    Poly p = parse_poly("x^2+3*x+1", f5);
    CHECK(p == Poly::from_int_coeffs(f5, {1, 3, 1}));
    CHECK(format_poly(p) == "x^2+3*x+1");
    CHECK(parse_poly(format_poly(p), f5) == p);

    // negatives reduce mod p, products expand
    CHECK(parse_poly("-x+2", f5) == Poly::from_int_coeffs(f5, {2, 4}));
    CHECK(parse_poly("(x+1)*(x+4)", f5) == Poly::from_int_coeffs(f5, {4, 0, 1}));
    CHECK(parse_poly("0", f5).is_zero());
    CHECK(format_poly(Poly::zero(f5)) == "0");

    auto f9 = extension(prime_field(3), 2, 0);
    Poly q = parse_poly("(t+1)*x^2+t", f9);
    CHECK(q.degree() == 2);
    CHECK(q.coeff(2) == f9->gen() + f9->one());
    CHECK(q.coeff(0) == f9->gen());
    CHECK(format_poly(q) == "(t+1)*x^2+t");
    CHECK(parse_poly(format_poly(q), f9) == q);

    CHECK_THROWS_AS(parse_poly("x^2+", f5), Error);
    CHECK_THROWS_AS(parse_poly("t+1", f5), Error); // no t over a prime field
    CHECK_THROWS_AS(parse_poly("y+1", f5), Error);
}

TEST_CASE("element and matrix grammar") {
    auto f9 = extension(prime_field(3), 2, 0);
    FElem x = parse_element("2*t+1", f9);
    CHECK(x == f9->gen() * f9->from_int(2) + f9->one());
    CHECK(format_element(x) == "2*t+1");
    CHECK_THROWS_AS(parse_element("x+1", f9), Error);

    auto f5 = prime_field(5);
    Mobius A = parse_mobius("[[1,2],[3,4]]", f5);
    CHECK(A.a == f5->from_int(1));
    CHECK(A.d == f5->from_int(4));
    CHECK_THROWS_AS(parse_mobius("[[1,1],[1,1]]", f5), Error); // singular
    CHECK_THROWS_AS(parse_mobius("[[1,2],[3]]", f5), Error);
}

TEST_CASE("map grammar round trip") {
    auto f3 = prime_field(3);
    RatMap r = parse_map("(x)/(x^2+1)", f3);
    CHECK(r.num() == Poly::from_int_coeffs(f3, {0, 1}));
    CHECK(r.den() == Poly::from_int_coeffs(f3, {1, 0, 1}));
    CHECK(format_map(r) == "(x)/(x^2+1)");
    CHECK(parse_map(format_map(r), f3) == r);
    CHECK_THROWS_AS(parse_map("x/(x^2+1)", f3), Error);
    CHECK_THROWS_AS(parse_map("(x)/(0)", f3), Error);
}

TEST_CASE("report JSON shapes") {
    auto f3 = prime_field(3);
    RatMap r = parse_map("(x)/(x^2+1)", f3);
    auto rep = classify(r, f3->from_int(0));
    Json j = crit_report_json(rep);
    CHECK(j["critical"] == true);
    CHECK(j["family"] == "II_g");
    CHECK(j["c"]["num"] == "0");
    CHECK(j["c"]["den"] == "1");
    CHECK(j["reversed_orbit"]["finite"] == true);
    CHECK(j["reversed_orbit"]["elements"] == Json::array({"0"}));
    CHECK(j["e"] == 1);
    CHECK(j["N"] == 1);

    auto f5 = prime_field(5);
    auto rep2 = classify(parse_map("(x^2+1)/(1)", f5), f5->from_int(0));
    Json j2 = crit_report_json(rep2);
    CHECK(j2["c"]["num"] == "6");
    CHECK(j2["c"]["den"] == "7");
    CHECK(j2["critical"] == false);
    CHECK(j2["family"] == "NonCritical");
}

TEST_CASE("stats CSV") {
    auto f3 = prime_field(3);
    StatRecord rec = stats_at(parse_poly("x^2+1", f3), parse_map("(x^2)/(1)", f3), 1);
    CHECK(stats_csv_header() == "n,delta,M,N,A_num,A_den");
    CHECK(stats_csv_row(rec) == "1,4,2,2,2,1");
}

TEST_CASE("preimage tree DOT export") {
    auto f5 = prime_field(5);
    RatMap r = parse_map("(x^2+1)/(1)", f5);
    std::string dot = preimage_tree_dot(r, f5->from_int(0), 2);
    CHECK(dot.find("digraph preimages") != std::string::npos);
    CHECK(dot.find("deg=1") != std::string::npos);
    CHECK(dot.find("->") != std::string::npos);
    // depth-2 tree of 0 under x^2+1: preimages {2,3}, then {1,4} and none
    CHECK(dot.find("n3") != std::string::npos);
}
