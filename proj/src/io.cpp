#include "gpcpd/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gpcpd/error.hpp"

namespace gpcpd {

namespace {

using Json = nlohmann::json;

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Format, e.what()).with_byte_offset(static_cast<std::int64_t>(e.byte));
  }
}

void expect_format(const Json& j, const char* tag) {
  if (!j.is_object()) throw Error(ErrorCode::Format, "top-level value must be an object");
  if (!j.contains("format") || !j["format"].is_string() || j["format"].get<std::string>() != tag) {
    throw Error(ErrorCode::Format, std::string("missing or wrong \"format\" tag, expected ") + tag);
  }
}

Dims read_dims(const Json& j) {
  if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].empty()) {
    throw Error(ErrorCode::Format, "\"dims\" must be a nonempty array");
  }
  Dims d;
  for (const auto& v : j["dims"]) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
      throw Error(ErrorCode::Format, "\"dims\" entries must be positive integers");
    }
    d.push_back(v.get<Index>());
  }
  return d;
}

Complex read_complex(const Json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw Error(ErrorCode::Format, "complex entries must be [re, im] number pairs");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Json write_complex(Complex c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    throw Error(ErrorCode::Format, "non-finite values cannot be serialized");
  }
  return Json::array({c.real(), c.imag()});
}

}  // namespace

DenseTensor parse_tensor(std::string_view text) {
  const Json j = parse_json(text);
  expect_format(j, "ctensor-v1");
  Dims dims = read_dims(j);
  if (!j.contains("data") || !j["data"].is_array()) throw Error(ErrorCode::Format, "\"data\" must be an array");
  const auto& data = j["data"];
  if (static_cast<Index>(data.size()) != product(dims)) {
    throw Error(ErrorCode::Format, "data length " + std::to_string(data.size()) + " does not match dims product " +
                                       std::to_string(product(dims)));
  }
  std::vector<Complex> values;
  values.reserve(data.size());
  for (const auto& v : data) values.push_back(read_complex(v));
  return DenseTensor(std::move(dims), std::move(values));
}

std::string format_tensor(const DenseTensor& t) {
  Json j;
  j["format"] = "ctensor-v1";
  j["dims"] = t.dims();
  Json data = Json::array();
  for (const Complex& c : t.data()) data.push_back(write_complex(c));
  j["data"] = std::move(data);
  return j.dump() + "\n";
}

CPDecomposition parse_factors(std::string_view text) {
  const Json j = parse_json(text);
  expect_format(j, "cpfactors-v1");
  const Dims dims = read_dims(j);
  if (!j.contains("rank") || !j["rank"].is_number_integer() || j["rank"].get<std::int64_t>() < 0) {
    throw Error(ErrorCode::Format, "\"rank\" must be a nonnegative integer");
  }
  const Index r = j["rank"].get<Index>();
  if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].size() != dims.size()) {
    throw Error(ErrorCode::Format, "\"factors\" must hold one matrix per mode");
  }
  std::vector<Matrix> f;
  for (std::size_t m = 0; m < dims.size(); ++m) {
    const auto& cols = j["factors"][m];
    if (!cols.is_array() || static_cast<Index>(cols.size()) != r) {
      throw Error(ErrorCode::Format, "factor " + std::to_string(m + 1) + " must have " + std::to_string(r) + " columns");
    }
    Matrix u(dims[m], r);
    for (Index s = 0; s < r; ++s) {
      const auto& col = cols[static_cast<std::size_t>(s)];
      if (!col.is_array() || static_cast<Index>(col.size()) != dims[m]) {
        throw Error(ErrorCode::Format, "factor " + std::to_string(m + 1) + " column length must equal its dimension");
      }
      for (Index i = 0; i < dims[m]; ++i) u(i, s) = read_complex(col[static_cast<std::size_t>(i)]);
    }
    f.push_back(std::move(u));
  }
  return CPDecomposition(std::move(f));
}

std::string format_factors(const CPDecomposition& cp) {
  Json j;
  j["format"] = "cpfactors-v1";
  j["dims"] = cp.dims();
  j["rank"] = cp.rank();
  Json factors = Json::array();
  for (const Matrix& u : cp.factors()) {
    Json cols = Json::array();
    for (Index s = 0; s < u.cols(); ++s) {
      Json col = Json::array();
      for (Index i = 0; i < u.rows(); ++i) col.push_back(write_complex(u(i, s)));
      cols.push_back(std::move(col));
    }
    factors.push_back(std::move(cols));
  }
  j["factors"] = std::move(factors);
  return j.dump() + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "read failed for " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

DenseTensor read_tensor(const std::filesystem::path& path) { return parse_tensor(read_file(path)); }
void write_tensor(const std::filesystem::path& path, const DenseTensor& t) { write_file(path, format_tensor(t)); }
CPDecomposition read_factors(const std::filesystem::path& path) { return parse_factors(read_file(path)); }
void write_factors(const std::filesystem::path& path, const CPDecomposition& cp) {
  write_file(path, format_factors(cp));
}

}  // namespace gpcpd
