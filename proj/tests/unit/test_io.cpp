#include <gtest/gtest.h>

#include <filesystem>

#include "gpcpd/decompose.hpp"
#include "gpcpd/error.hpp"
#include "gpcpd/io.hpp"
#include "gpcpd/random.hpp"
#include "gpcpd/unfold.hpp"
#include "oracles.hpp"
#include "reference_data.hpp"

using namespace gpcpd;

namespace {

std::filesystem::path tmp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("gpcpd_io_" + std::to_string(::getpid()) + "_" + name);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Io, TensorRoundTripBitIdentical) {
  Rng rng(123);
  std::vector<Complex> data(4 * 3 * 5);
  for (Complex& x : data) x = rng.complex_gaussian() * 1e-7 + Complex(1.0 / 3.0, -2.0 / 7.0);
  const DenseTensor t({4, 3, 5}, data);
  const auto p = tmp("t.json");
  write_tensor(p, t);
  const DenseTensor back = read_tensor(p);
  std::filesystem::remove(p);
  ASSERT_EQ(back.dims(), t.dims());
  for (Index i = 0; i < t.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i].real()), std::bit_cast<std::uint64_t>(t[i].real()));
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back[i].imag()), std::bit_cast<std::uint64_t>(t[i].imag()));
  }
}

TEST(Io, SpecialValuesRoundTrip) {
  const DenseTensor t({3}, {Complex(-0.0, 5e-324), Complex(1.7976931348623157e308, -1e-300), Complex(0.1, 0.2)});
  EXPECT_EQ(parse_tensor(format_tensor(t)), t);
}

TEST(Io, FactorsRoundTripBitIdentical) {
  const CPDecomposition cp = oracle::random_cp({4, 3, 2}, 3, 5);
  const auto p = tmp("f.json");
  write_factors(p, cp);
  const CPDecomposition back = read_factors(p);
  std::filesystem::remove(p);
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(back.factor(j), cp.factor(j));
}

TEST(Io, LengthMismatch) {
  EXPECT_EQ(code_of([] { parse_tensor(R"({"format":"ctensor-v1","dims":[2,2],"data":[[1,0],[2,0],[3,0]]})"); }),
            ErrorCode::Format);
}

TEST(Io, WrongTag) {
  EXPECT_EQ(code_of([] { parse_tensor(R"({"format":"ctensor-v2","dims":[1],"data":[[1,0]]})"); }),
            ErrorCode::Format);
  EXPECT_EQ(code_of([] { parse_factors(R"({"format":"ctensor-v1","dims":[1],"data":[[1,0]]})"); }),
            ErrorCode::Format);
}

TEST(Io, MalformedJsonReportsByteOffset) {
  const std::string text = R"({"format":"ctensor-v1","dims":[2],"data":[[1,0],[2,)";
  try {
    parse_tensor(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Format);
    EXPECT_GT(e.byte_offset(), 40);
    EXPECT_LE(e.byte_offset(), static_cast<std::int64_t>(text.size()) + 1);
  }
}

TEST(Io, MissingFile) {
  EXPECT_EQ(code_of([] { read_tensor("/nonexistent/dir/x.json"); }), ErrorCode::Io);
}

TEST(Io, FixturePipeline) {
  const DenseTensor f = read_tensor(refdata::fixture("rank4_4x4x3.json"));
  EXPECT_EQ(f.dims(), (Dims{4, 4, 3}));
  EXPECT_EQ(estimate_rank(f), 4);
  const CPDecomposition cp = decompose(f, 4, 7);
  const auto p = tmp("pipe.json");
  write_factors(p, cp);
  const DenseTensor back = expand(read_factors(p));
  std::filesystem::remove(p);
  EXPECT_LE(hs_norm(f - back), 1e-8 * hs_norm(f));
}

TEST(Io, FixtureFactorsReproduceFixtureTensors) {
  const DenseTensor a = refdata::rank4_4x4x3(), b = refdata::rank5_5x4x3x3();
  // Integer entries except for a few thirds and ninths in the order-4 factors.
  EXPECT_EQ(hs_norm(expand(refdata::rank4_4x4x3_factors()) - a), 0.0);
  EXPECT_LE(hs_norm(expand(refdata::rank5_5x4x3x3_factors()) - b), 1e-15 * hs_norm(b));
}
