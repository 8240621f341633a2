#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gpcpd/cp.hpp"
#include "gpcpd/tensor.hpp"

namespace gpcpd {

// ctensor-v1:   {"format":"ctensor-v1","dims":[...],"data":[[re,im],...]}
// cpfactors-v1: {"format":"cpfactors-v1","dims":[...],"rank":r,
//                "factors":[F1,...,Fm]}, Fj a list of r columns of [re,im].
// Doubles are written in shortest round-trip form, so reading back is exact.

DenseTensor parse_tensor(std::string_view text);
std::string format_tensor(const DenseTensor& t);
DenseTensor read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, const DenseTensor& t);

CPDecomposition parse_factors(std::string_view text);
std::string format_factors(const CPDecomposition& cp);
CPDecomposition read_factors(const std::filesystem::path& path);
void write_factors(const std::filesystem::path& path, const CPDecomposition& cp);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace gpcpd
