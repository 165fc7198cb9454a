#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "semisep/error.hpp"
#include "semisep/io.hpp"
#include "semisep/model.hpp"

using namespace semisep;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InternalError;
}

}  // namespace

TEST_CASE("instance validation") {
  const auto inst = Instance::from_bounds({{1, 100}, {10, 20}});
  CHECK(inst.size() == 2);
  CHECK(inst[0].name == "item_0");
  CHECK_FALSE(inst.degenerate());

  const auto single_zero = Instance::from_bounds({{0, 1}});
  CHECK(single_zero.degenerate());

  CHECK(code_of([] { Instance::from_bounds({{5, 3}}); }) == Errc::LowerExceedsUpper);
  CHECK(code_of([] { Instance::from_bounds({{0, 0}}); }) == Errc::NonPositiveUpper);
  CHECK(code_of([] { Instance::from_bounds({{-1, 2}}); }) == Errc::NegativeLower);
  CHECK(code_of([] { Instance::validate({}); }) == Errc::EmptyInstance);
  CHECK(code_of([] { Instance::from_bounds({{1, std::nan("")}}); }) == Errc::NonFinite);
}

TEST_CASE("ratio order is stable on ties") {
  const auto inst = Instance::from_bounds({{1, 2}, {1, 10}, {2, 4}, {0, 3}});
  const std::vector<std::size_t> want{3, 1, 0, 2};
  CHECK(inst.ratio_order() == want);
}

TEST_CASE("support membership") {
  const auto inst = Instance::from_bounds({{1, 2}, {0, 3}});
  CHECK(inst.contains(std::vector<double>{1, 0}));
  CHECK(inst.contains(std::vector<double>{2 + 1e-13, 3}));
  CHECK_FALSE(inst.contains(std::vector<double>{0.5, 1}));
  CHECK(code_of([&] { inst.check_contains(std::vector<double>{3, 1}); }) == Errc::OutOfSupport);
  CHECK(code_of([&] { inst.check_contains(std::vector<double>{1}); }) == Errc::ShapeMismatch);
}

TEST_CASE("mechanism quote enforces IR and ranges") {
  const std::vector<double> v{1.0, 2.0};
  const auto q = MechanismQuote::make({0.5, 1.0}, 2.0, v);
  CHECK(q.utility() == doctest::Approx(0.5));
  CHECK(code_of([&] { MechanismQuote::make({0.5, 1.0}, 2.6, v); }) == Errc::IrViolation);
  CHECK(code_of([&] { MechanismQuote::make({1.5, 0.0}, 0.0, v); }) == Errc::DomainError);
  CHECK(code_of([&] { MechanismQuote::make({0.5, 0.0}, -1.0, v); }) == Errc::DomainError);
}

TEST_CASE("partition validation") {
  const auto p = PartitionSpec::validate(3, {{{2}, 1, 2}, {{1, 0}, 2, 4}});
  CHECK(p.bundles[0].members == std::vector<std::size_t>{0, 1});
  CHECK(p.bundle_of() == std::vector<std::size_t>{0, 0, 1});
  CHECK(p.bundle_instance()[0].name == "{0,1}");

  CHECK(code_of([] { PartitionSpec::validate(2, {{{0, 1}, 1, 2}, {{1}, 1, 2}}); }) ==
        Errc::OverlappingBundles);
  CHECK(code_of([] { PartitionSpec::validate(3, {{{0, 1}, 1, 2}}); }) == Errc::UncoveredItem);
  CHECK(code_of([] { PartitionSpec::validate(2, {{{0, 5}, 1, 2}}); }) == Errc::InvalidIndex);
  CHECK(code_of([] { PartitionSpec::validate(1, {{{0}, 3, 2}}); }) == Errc::LowerExceedsUpper);
}

TEST_CASE("json round trip of random instances") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto b = oracle::random_bounds(rng, 1 + trial % 5, true);
    std::vector<Item> items;
    for (std::size_t j = 0; j < b.size(); ++j) {
      items.push_back({"it\"em " + std::to_string(j), b[j].first, b[j].second});
    }
    const auto inst = Instance::validate(items);
    CHECK(io::parse_instance(io::to_json(inst)) == inst);
  }
}

TEST_CASE("json parsing errors and partitions") {
  CHECK(code_of([] { io::parse_instance("{"); }) == Errc::ParseError);
  CHECK(code_of([] { io::parse_instance(R"({"items":[{"lower":1}]})"); }) == Errc::ParseError);
  CHECK(code_of([] { io::parse_instance(R"({"items":[{"lower":3,"upper":1}]})"); }) ==
        Errc::LowerExceedsUpper);

  const auto p = io::parse_partition(
      R"({"bundles":[{"members":[0,1],"lower":2,"upper":4},{"members":[2],"lower":1,"upper":2}]})");
  CHECK(p.item_count == 3);
  CHECK(io::parse_partition(io::to_json(p)) == p);

  const auto c = io::parse_collection(
      R"({"item_count":4,"subsets":[{"members":[1],"lower":1,"upper":2}]})");
  CHECK(c.item_count == 4);
  CHECK(code_of([] {
          io::parse_collection(R"({"subsets":[{"members":[0,0],"lower":1,"upper":2}]})");
        }) == Errc::DomainError);
}

TEST_CASE("price law pieces") {
  ItemPriceLaw law{0.5, 1.0, 0.5, 0.5, 1.0 + 0.5 * std::log(0.5)};
  CHECK(law.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(law.cdf(0.49) == 0.0);
  CHECK(law.cdf(0.5) == doctest::Approx(law.atom_mass));
  CHECK(law.cdf(1.0) == doctest::Approx(1.0));
  CHECK(law.quantile(0.0) == 0.5);
  CHECK(law.quantile(0.999999) == doctest::Approx(1.0).epsilon(1e-5));
  // quantile inverts the cdf on the continuous part
  for (double u : {0.7, 0.8, 0.95}) CHECK(law.cdf(law.quantile(u)) == doctest::Approx(u));
}
