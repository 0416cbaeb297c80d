#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "diffent/error.hpp"
#include "diffent/io.hpp"
#include "oracles.hpp"

using namespace diffent;
namespace fs = std::filesystem;

TEST(Io, FieldRoundTripIsExact) {
  std::mt19937_64 rng(51);
  std::normal_distribution<double> g;
  const Grid2D grid(8, 4, 0.3, 0.7);
  ComplexVector v(grid.size());
  for (auto& x : v) x = {g(rng), g(rng)};
  const SampledField f(grid, v, 3.5);
  std::stringstream ss;
  io::write_field(ss, f);
  const SampledField back = io::read_field(ss);
  EXPECT_EQ(back.grid(), grid);
  EXPECT_EQ(back.wavenumber(), 3.5);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(back.values()[i], v[i]);
}

TEST(Io, MalformedFieldRejected) {
  std::stringstream bad("not a field\n");
  try {
    io::read_field(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
  }
  std::stringstream truncated(std::string(io::kFieldMagic) + "\n2 2 1 1 1\n0 0\n");
  EXPECT_THROW(io::read_field(truncated), Error);
}

TEST(Io, UnitaryJsonRoundTrip) {
  std::mt19937_64 rng(52);
  const UnitaryMatrix u(oracle::haar_unitary(4, rng));
  const io::json j = nlohmann::json::parse(io::to_json(u).dump());
  const UnitaryMatrix back = io::unitary_from_json(j);
  EXPECT_LE((back.matrix() - u.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  const UnitaryMatrix from_coupling = io::unitary_from_json(io::to_json(to_coupling(u)));
  EXPECT_LE((from_coupling.matrix() - u.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Io, StateJsonRoundTrip) {
  std::mt19937_64 rng(53);
  const MultimodeFockState s = oracle::random_state(3, 3, 8, rng);
  const MultimodeFockState back = io::state_from_json(io::to_json(s));
  ASSERT_EQ(back.support_size(), s.support_size());
  for (const auto& [occ, a] : s.amplitudes()) EXPECT_EQ(back.amplitude(occ), a);
}

TEST(Io, DescriptorParsing) {
  const auto d = io::parse_descriptors("fock:2,coh:0.5:-0.25,sq:0.3,vac");
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(std::get<FockInput>(d[0]).n, 2);
  EXPECT_EQ(std::get<CoherentInput>(d[1]).alpha, cd(0.5, -0.25));
  EXPECT_EQ(std::get<SqueezedVacuumInput>(d[2]).lambda, 0.3);
  EXPECT_TRUE(std::holds_alternative<VacuumInput>(d[3]));
  for (const auto& d1 : d) EXPECT_EQ(to_string(io::parse_descriptor(to_string(d1))), to_string(d1));
  EXPECT_THROW(io::parse_descriptor("fock:x"), Error);
  EXPECT_THROW(io::parse_descriptor("thermal:1"), Error);
  EXPECT_EQ(io::parse_subset_mask("1,0,1"), (std::vector<int>{0, 2}));
  EXPECT_THROW(io::parse_subset_mask("1,0", 3), Error);
  EXPECT_THROW(io::parse_subset_mask("1,2"), Error);
}

TEST(Io, AtomicWriteAndCsv) {
  const fs::path dir = fs::temp_directory_path() / "diffent_io_test";
  fs::create_directories(dir);
  io::write_text_atomic(dir / "a.txt", "hello\n");
  EXPECT_EQ(io::read_text_file(dir / "a.txt"), "hello\n");
  EXPECT_FALSE(fs::exists(dir / "a.txt.tmp"));
  EXPECT_THROW(io::read_text_file(dir / "missing.txt"), Error);
  const std::string csv = io::matrix_csv(MatrixXcd::Identity(2, 2));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "row,col,re,im");
  fs::remove_all(dir);
}
