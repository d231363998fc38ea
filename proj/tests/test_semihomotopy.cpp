#include <gtest/gtest.h>

#include "support/generators.hpp"
#include "support/text.hpp"

using namespace semi;

namespace {

// X = Y = (1|1). Even homotopies read the parameter as x2, odd ones as t2.
SuperMap even_gamma(int n, const std::string& body) { return text::map(n, "(2|1) -> (1|1): " + body); }
SuperMap odd_gamma(int n, const std::string& body) { return text::map(n, "(1|2) -> (1|1): " + body); }
SuperMap xmap(int n, const std::string& body) { return text::map(n, "(1|1) -> (1|1): " + body); }

GrassmannElement el(int n, const std::string& e) { return text::element(n, e); }

void expect_kind(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

/// Every member of the family satisfies both endpoint relations.
void expect_closure(const SolutionSet<SuperMap>& s, const SuperMap& f, const SuperMap& g, const GrassmannElement& alpha,
                    const GrassmannElement& beta) {
  std::vector<SuperMap> members{s.particular};
  for (const auto& k : s.kernel_basis) members.push_back(add(s.particular, k));
  for (const auto& gamma : members) {
    const auto [a, b] = check_odd_semihomotopy(SemiHomotopy(gamma, ParameterKind::Odd, alpha, beta), f, g);
    ASSERT_TRUE(a.holds()) << gamma.to_string();
    ASSERT_TRUE(b.holds()) << gamma.to_string();
  }
}

/// (beta - alpha) Gamma equals the right-hand side of the average equation.
bool solves_average(const SuperMap& gamma, const SuperMap& f, const SuperMap& g, const GrassmannElement& alpha,
                    const GrassmannElement& beta) {
  return map_equal(scale(beta - alpha, gamma), odd_average_equation(f, g, alpha, beta).rhs.map());
}

}  // namespace

TEST(Stage, ConstantFamily) {
  const SemiHomotopy h(even_gamma(2, "x1' = x1; t1' = t1"), ParameterKind::Even, el(2, "0"), el(2, "g1 g2"));
  EXPECT_EQ(h.space(), (SuperDomainSignature{1, 1}));
  EXPECT_EQ(stage(h, el(2, "g1 g2")), SuperMap::identity(2, {1, 1}));
}

TEST(Stage, EvenParameterAtZero) {
  // f(x) + t d(x)
  const SemiHomotopy h(even_gamma(2, "x1' = x1 + x2 x1^2; t1' = t1 + g1 x2"), ParameterKind::Even, el(2, "0"),
                       el(2, "g1 g2"));
  EXPECT_EQ(stage(h, el(2, "0")), SuperMap::identity(2, {1, 1}));
  EXPECT_EQ(stage(h, el(2, "g1 g2")), xmap(2, "x1' = x1 + g1 g2 x1^2; t1' = t1"));
}

TEST(Stage, OddSubstitution) {
  // f + tau u with u = (t1, x1); tau = g1 gives f + g1 u.
  const SemiHomotopy h(odd_gamma(2, "x1' = x1 + t2 t1; t1' = t1 + t2 x1"), ParameterKind::Odd, el(2, "g1"),
                       el(2, "g2"));
  EXPECT_EQ(stage(h, el(2, "g1")), xmap(2, "x1' = x1 + g1 t1; t1' = t1 + g1 x1"));
}

TEST(Stage, Errors) {
  const auto gamma = even_gamma(2, "x1' = x1; t1' = t1");
  expect_kind(ErrorKind::BodyNotZero, [&] { SemiHomotopy(gamma, ParameterKind::Even, el(2, "1"), el(2, "0")); });
  expect_kind(ErrorKind::ParityMismatch, [&] { SemiHomotopy(gamma, ParameterKind::Even, el(2, "g1"), el(2, "0")); });
  const SemiHomotopy h(gamma, ParameterKind::Even, el(2, "0"), el(2, "g1 g2"));
  expect_kind(ErrorKind::BodyNotZero, [&] { (void)stage(h, el(2, "2 + g1 g2")); });
  expect_kind(ErrorKind::ParityMismatch, [&] { (void)stage(h, el(2, "g2")); });
  expect_kind(ErrorKind::ParityMismatch,
              [&] { SemiHomotopy(odd_gamma(2, "x1' = x1; t1' = t1"), ParameterKind::Odd, el(2, "g1 g2"), el(2, "g1")); });
  expect_kind(ErrorKind::SignatureMismatch,
              [&] { SemiHomotopy(text::map(2, "(0|1) -> (1|1): x1' = 0; t1' = t1"), ParameterKind::Even, el(2, "0"),
                                 el(2, "0")); });
}

TEST(EvenSemiHomotopy, EqualEndpoints) {
  const auto f = xmap(2, "x1' = x1^2; t1' = g1 x1");
  const SemiHomotopy h(even_gamma(2, "x1' = x1^2; t1' = g1 x1"), ParameterKind::Even, el(2, "0"), el(2, "g1 g2"));
  const auto [a, b] = check_even_semihomotopy(h, f, f);
  EXPECT_EQ(a.relation, "homotopy-start");
  EXPECT_EQ(b.relation, "homotopy-end");
  EXPECT_TRUE(a.holds());
  EXPECT_TRUE(b.holds());
}

TEST(EvenSemiHomotopy, VacuousWhenEndpointsCoincide) {
  const SemiHomotopy h(even_gamma(2, "x1' = x2; t1' = 0"), ParameterKind::Even, el(2, "g1 g2"), el(2, "g1 g2"));
  const auto f = xmap(2, "x1' = 5 x1; t1' = t1");
  const auto [a, b] = check_even_semihomotopy(h, f, SuperMap::identity(2, {1, 1}));
  EXPECT_TRUE(a.holds());
  EXPECT_TRUE(b.holds());
  EXPECT_NE(stage(h, h.start()), f);
}

TEST(EvenSemiHomotopy, NoCancellation) {
  // Delta = g1 g2; f moves the start stage by an element of Ann(g1 g2).
  const int n = 3;
  const SemiHomotopy h(even_gamma(n, "x1' = x1 + x2; t1' = t1"), ParameterKind::Even, el(n, "0"), el(n, "g1 g2"));
  const auto ann = solve_linear(h.delta(), GrassmannElement::zero(n));
  ASSERT_TRUE(ann);
  const auto start = stage(h, h.start());
  const auto g = stage(h, h.end());
  for (const auto& k : ann->kernel_basis) {
    auto comps = start.components();
    auto& target = comps[parity(k) == Parity::Odd ? 1 : 0];
    target = target + SuperPolynomial::constant(n, start.source(), k);
    const SuperMap f(n, start.source(), start.target(), comps);
    ASSERT_TRUE(f.parity_valid());
    ASSERT_NE(f, start);
    const auto [a, b] = check_even_semihomotopy(h, f, g);
    EXPECT_TRUE(a.holds()) << k.to_string();
    EXPECT_TRUE(b.holds());
  }
  // Outside the annihilator the start relation fails.
  auto comps = start.components();
  comps[0] = comps[0] + SuperPolynomial::constant(n, start.source(), el(n, "1"));
  const auto [a, b] = check_even_semihomotopy(h, SuperMap(n, start.source(), start.target(), comps), g);
  EXPECT_FALSE(a.holds());
  EXPECT_TRUE(b.holds());
}

TEST(EvenSemiHomotopy, WrongKindAndSignature) {
  const SemiHomotopy odd(odd_gamma(2, "x1' = x1; t1' = t1"), ParameterKind::Odd, el(2, "g1"), el(2, "g2"));
  const auto id = SuperMap::identity(2, {1, 1});
  expect_kind(ErrorKind::ParityMismatch, [&] { (void)check_even_semihomotopy(odd, id, id); });
  const SemiHomotopy even(even_gamma(2, "x1' = x1; t1' = t1"), ParameterKind::Even, el(2, "0"), el(2, "g1 g2"));
  expect_kind(ErrorKind::ParityMismatch, [&] { (void)check_odd_semihomotopy(even, id, id); });
  expect_kind(ErrorKind::SignatureMismatch,
              [&] { (void)check_even_semihomotopy(even, SuperMap::identity(2, {1, 0}), id); });
}

TEST(OddSemiHomotopy, EqualEndpoints) {
  const auto f = xmap(2, "x1' = x1 + g1 t1; t1' = t1");
  const SemiHomotopy h(odd_gamma(2, "x1' = x1 + g1 t1; t1' = t1"), ParameterKind::Odd, el(2, "g1"), el(2, "g2"));
  const auto [a, b] = check_odd_semihomotopy(h, f, f);
  EXPECT_TRUE(a.holds());
  EXPECT_TRUE(b.holds());
}

TEST(OddSemiHomotopy, VacuousWhenEndpointsCoincide) {
  const SemiHomotopy h(odd_gamma(2, "x1' = 0; t1' = t2"), ParameterKind::Odd, el(2, "g1"), el(2, "g1"));
  const auto [a, b] = check_odd_semihomotopy(h, SuperMap::identity(2, {1, 1}), xmap(2, "x1' = x1^2; t1' = 0"));
  EXPECT_TRUE(a.holds());
  EXPECT_TRUE(b.holds());
}

TEST(OddSemiHomotopy, OddScalarFlipsParity) {
  const SemiHomotopy h(odd_gamma(2, "x1' = x1 + t2 t1; t1' = t1"), ParameterKind::Odd, el(2, "g1"), el(2, "g2"));
  const auto f = xmap(2, "x1' = x1; t1' = t1");
  const auto [a, b] = check_odd_semihomotopy(h, f, f);
  // (g2 - g1)(x1 + g1 t1) differs from (g2 - g1) x1 by g2 g1 t1.
  ASSERT_EQ(a.verdict, Verdict::Fail);
  for (const auto* m : {&a.witness->first, &a.witness->second}) {
    EXPECT_EQ(m->component(0).parity(), Parity::Odd);
    EXPECT_EQ(m->component(1).parity(), Parity::Even);
  }
  EXPECT_NE(a.note.find("scalar"), std::string::npos);
}

TEST(OddAverage, EqualMaps) {
  const auto f = xmap(2, "x1' = x1^2 + g1 t1; t1' = g2 x1");
  const auto alpha = el(2, "g1");
  const auto beta = el(2, "g2");
  const auto s = odd_average_solutions(f, f, alpha, beta, 2);
  ASSERT_TRUE(s);
  const auto lifted = compose(f, parameter_drop(2, {1, 1}, ParameterKind::Odd));
  EXPECT_TRUE(solves_average(lifted, f, f, alpha, beta));
  EXPECT_TRUE(solves_average(s->particular, f, f, alpha, beta));
  expect_closure(*s, f, f, alpha, beta);
}

TEST(OddAverage, ConstantMapsDifferingByNilpotent) {
  // f = 1, g = 1 + g1 g2: Gamma = 1 - g1 tau solves the average with g2 - g1.
  const auto f = text::map(2, "(1|0) -> (1|0): x1' = 1");
  const auto g = text::map(2, "(1|0) -> (1|0): x1' = 1 + g1 g2");
  const auto alpha = el(2, "g1");
  const auto beta = el(2, "g2");
  const auto s = odd_average_solutions(f, g, alpha, beta, 1);
  ASSERT_TRUE(s);
  EXPECT_FALSE(s->kernel_basis.empty());
  expect_closure(*s, f, g, alpha, beta);
  EXPECT_TRUE(solves_average(text::map(2, "(1|1) -> (1|0): x1' = 1 - g1 t1"), f, g, alpha, beta));
  EXPECT_TRUE(solves_average(text::map(2, "(1|1) -> (1|0): x1' = 1 - g2 t1"), f, g, alpha, beta));
}

TEST(OddAverage, NoSolution) {
  // g - f = 1 has a body, so tau (g - f) is not a multiple of g2 - g1.
  const auto f = text::map(2, "(1|0) -> (1|0): x1' = 1");
  const auto g = text::map(2, "(1|0) -> (1|0): x1' = 2");
  EXPECT_FALSE(odd_average_solutions(f, g, el(2, "g1"), el(2, "g2"), 2));
}

TEST(OddAverage, Errors) {
  const auto f = xmap(2, "x1' = x1; t1' = t1");
  expect_kind(ErrorKind::ParityMismatch, [&] { (void)odd_average_solutions(f, f, el(2, "g1 g2"), el(2, "g1"), 1); });
  expect_kind(ErrorKind::SignatureMismatch,
              [&] { (void)odd_average_solutions(f, SuperMap::identity(2, {1, 0}), el(2, "g1"), el(2, "g2"), 1); });
}

TEST(OddAverage, ClassicalAverageWithUnitInterval) {
  // (b - a) Gamma = (b - t) f + (t - a) g with a = 0, b = 1 over an even
  // parameter x2 has the unique solution (1 - t) f + t g.
  const auto f = text::map(1, "(1|0) -> (1|0): x1' = x1^2");
  const auto g = text::map(1, "(1|0) -> (1|0): x1' = 3 x1 + 1");
  const auto rhs = text::map(1, "(2|0) -> (1|0): x1' = (1 - x2) x1^2 + x2 (3 x1 + 1)");
  const MapEquation eq{MapExpr::unknown(1, {2, 0}, {1, 0}), MapExpr::known(rhs)};
  const auto s = solve_map_ansatz(eq, 3);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->dimension(), 0u);
  const SemiHomotopy h(s->particular, ParameterKind::Even, el(1, "0"), el(1, "0"));
  EXPECT_EQ(stage(h, el(1, "0")), f);
  EXPECT_EQ(compose(s->particular, text::map(1, "(1|0) -> (2|0): x1' = x1; x2' = 1")), g);
}

TEST(OddAverageProperty, Closure) {
  gen::Rng rng(71);
  int solved = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = gen::uniform(rng, 2, 4);
    const SuperDomainSignature x{1, gen::uniform(rng, 0, 1)};
    const SuperDomainSignature y{1, 1};
    const auto inst = gen::average_instance(rng, n, x, y, 1);
    const auto s = odd_average_solutions(inst.f, inst.g, inst.alpha, inst.beta, 2);
    ASSERT_TRUE(s) << inst.f.to_string() << " / " << inst.g.to_string();
    ++solved;
    expect_closure(*s, inst.f, inst.g, inst.alpha, inst.beta);
  }
  EXPECT_EQ(solved, 30);
}

TEST(OddAverageProperty, AnySolutionPassesChecks) {
  // Unconstrained endpoint maps: whenever a family exists it closes.
  gen::Rng rng(72);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = gen::uniform(rng, 2, 3);
    const SuperDomainSignature x{1, 0};
    const SuperDomainSignature y{1, 1};
    const auto f = gen::map(rng, n, x, y, 1, 2);
    const auto g = gen::coin(rng) ? f : add(f, gen::map(rng, n, x, y, 1, 2));
    const auto alpha = gen::element(rng, n, 2, gen::Shape::Odd);
    const auto beta = gen::element(rng, n, 2, gen::Shape::Odd);
    const auto s = odd_average_solutions(f, g, alpha, beta, 2);
    if (!s) continue;
    ++solved;
    expect_closure(*s, f, g, alpha, beta);
  }
  EXPECT_GT(solved, 10);
}
