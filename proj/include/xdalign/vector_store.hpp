#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "xdalign/embedding.hpp"

namespace xdalign {

// Binary layout, all integers and floats little-endian:
//   "XDEMB1\0"            7 bytes
//   u32 rows, u32 dim
//   rows*dim f32           row-major
//   rows x (u32 byte length, UTF-8 id bytes)
inline constexpr char kVectorMagic[7] = {'X', 'D', 'E', 'M', 'B', '1', '\0'};

void write_vectors(std::ostream& out, const EmbeddingMatrix& matrix);
EmbeddingMatrix read_vectors(std::istream& in);

void save_vectors(const EmbeddingMatrix& matrix, const std::filesystem::path& path);
EmbeddingMatrix load_vectors(const std::filesystem::path& path);

}  // namespace xdalign
