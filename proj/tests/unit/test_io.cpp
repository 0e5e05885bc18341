#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "stripbound/error.hpp"
#include "stripbound/io.hpp"

namespace sb = stripbound;
namespace io = stripbound::io;
using sb::Complex;
using nlohmann::json;

TEST(Io, CountsBelowTwoToTheFiftyThreeAreIntegers) {
  EXPECT_TRUE(io::count_to_json(7.0).is_number_integer());
  EXPECT_TRUE(io::count_to_json(9007199254740992.0).is_number_integer());
  const json big = io::count_to_json(3.1e25);
  EXPECT_TRUE(big.is_number_float());
  EXPECT_EQ(big.get<double>(), 3.1e25);
  EXPECT_EQ(io::count_to_json(std::numeric_limits<double>::infinity()), json("inf"));
}

TEST(Io, ComplexForms) {
  EXPECT_EQ(io::complex_from_json(json::array({1.5, -2.0}), "z"), Complex(1.5, -2.0));
  EXPECT_EQ(io::complex_from_json(json(3.0), "z"), Complex(3.0, 0.0));
  EXPECT_EQ(io::complex_from_json(json{{"re", 1.0}, {"im", 2.0}}, "z"), Complex(1.0, 2.0));
  EXPECT_THROW(io::complex_from_json(json("x"), "z"), sb::InvalidInput);
}

TEST(Io, ZeroSetRoundTrip) {
  oracle::Rng rng(90);
  for (int draw = 0; draw < 20; ++draw) {
    std::vector<sb::ZeroEntry> raw;
    const int n = rng.integer(0, 12);
    for (int i = 0; i < n; ++i) {
      raw.push_back({Complex{rng.uniform(-50, 50), rng.uniform(0.1, 5)}, static_cast<double>(rng.integer(1, 9))});
    }
    const sb::ZeroSet zs = sb::make_zero_set(raw);
    const json j = io::to_json(zs);
    EXPECT_EQ(j.at("schema"), io::kSchemaZeroSet);
    EXPECT_EQ(io::zero_set_from_json(json::parse(j.dump())), zs);
  }
  const json bare = json::array({json{{"re", 1.0}, {"im", 1.0}}});
  EXPECT_EQ(io::zero_set_from_json(bare).size(), 1u);
}

TEST(Io, ZeroSetRejectsLowerHalfPlane) {
  const json bad = json::array({json{{"re", 1.0}, {"im", -1.0}}});
  EXPECT_THROW(io::zero_set_from_json(bad), sb::InvalidInput);
}

TEST(Io, ProductConfigRoundTripWithHugeExponents) {
  sb::blaschke::ProductConfig cfg;
  cfg.nodes = {{1.0, 1.0}, {3.0, 9.0}, {1e12, 3.0e25}};
  cfg.tail_law = sb::blaschke::TailLaw{2.0};
  cfg.rate_name = "1/(1+x)";
  const json j = io::to_json(cfg);
  EXPECT_EQ(j.at("schema"), io::kSchemaProductConfig);
  EXPECT_TRUE(j.at("nodes")[1].at("k").is_number_integer());
  const auto back = io::product_config_from_json(json::parse(j.dump()));
  ASSERT_EQ(back.nodes.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.nodes[i].x, cfg.nodes[i].x);
    EXPECT_EQ(back.nodes[i].exponent, cfg.nodes[i].exponent);
  }
  EXPECT_EQ(back.kind, cfg.kind);
  ASSERT_TRUE(back.tail_law.has_value());
  EXPECT_EQ(back.tail_law->exponent, 2.0);
  EXPECT_EQ(back.rate_name, cfg.rate_name);
  EXPECT_EQ(io::to_json(back).dump(), j.dump());
}

TEST(Io, ProductConfigErrors) {
  EXPECT_THROW(io::product_config_from_json(json{{"schema", "stripbound.zero_set/1"}}), sb::InvalidInput);
  EXPECT_THROW(io::product_config_from_json(json{{"kind", "normalized"}}), sb::InvalidInput);
  const json bad_k = {{"kind", "normalized"}, {"nodes", json::array({json{{"x", 1.0}, {"k", 1.5}}})}};
  EXPECT_THROW(io::product_config_from_json(bad_k), sb::InvalidInput);
}

TEST(Io, FiniteRankSpecRoundTrip) {
  oracle::Rng rng(91);
  const auto basis = rng.orthonormal(5, 2);
  const json params = {{"zeros", json::array({json::array({1.0, 2.0}), json::array({-3.0, 0.5})})}};
  const sb::op::FiniteRankSpec spec(basis, sb::op::make_family("blaschke_diagonal", params, 2), {2.0, 1, 0.5});
  const json j = io::to_json(spec);
  EXPECT_EQ(j.at("schema"), io::kSchemaFiniteRank);
  const auto back = io::finite_rank_spec_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.ambient_dim(), 5);
  EXPECT_EQ(back.rank(), 2);
  EXPECT_LE((back.basis() - basis).norm(), 1e-15);
  const Complex z{0.7, 0.3};
  EXPECT_LE((back.coeff(z) - spec.coeff(z)).norm(), 1e-15);
  EXPECT_EQ(back.growth().m, 1);
  EXPECT_EQ(io::to_json(back).dump(), j.dump());
}

TEST(Io, CustomFamiliesAreNotSerializable) {
  sb::op::CoefficientFamily f;
  f.family = "custom";
  f.eval = [](Complex) { return sb::op::CMatrix::Zero(1, 1).eval(); };
  const sb::op::FiniteRankSpec spec(sb::op::CMatrix::Identity(2, 1), f, {});
  EXPECT_THROW(io::to_json(spec), sb::InvalidInput);
}

TEST(Io, NonFiniteValuesBecomeStrings) {
  sb::Estimate e;
  e.value = std::numeric_limits<double>::infinity();
  const json j = io::to_json(e);
  EXPECT_NO_THROW(json::parse(j.dump()));
}

TEST(Io, FileHelpers) {
  const auto dir = std::filesystem::temp_directory_path() / "stripbound_io_test";
  std::filesystem::create_directories(dir);
  const json doc = {{"b", 1}, {"a", json::array({1, 2})}};
  io::write_json_file(dir / "doc.json", doc);
  EXPECT_EQ(io::read_json_file(dir / "doc.json"), doc);
  EXPECT_THROW(io::read_json_file(dir / "missing.json"), sb::InvalidInput);
  std::filesystem::remove_all(dir);
}
