#include "xdalign/vector_store.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "xdalign/error.hpp"

namespace xdalign {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                              static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in, const char* what) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) throw LengthError(std::string("truncated vector file: ") + what);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) throw FormatError(std::string(what) + " exceeds 32 bits");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void write_vectors(std::ostream& out, const EmbeddingMatrix& matrix) {
  out.write(kVectorMagic, sizeof kVectorMagic);
  put_u32(out, checked_u32(matrix.rows(), "row count"));
  put_u32(out, checked_u32(matrix.dim(), "dimension"));
  for (const float f : matrix.data()) put_u32(out, std::bit_cast<std::uint32_t>(f));
  for (const auto& id : matrix.ids()) {
    put_u32(out, checked_u32(id.size(), "id length"));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
  }
  if (!out) throw Error("failed writing vector file");
}

EmbeddingMatrix read_vectors(std::istream& in) {
  char magic[sizeof kVectorMagic];
  if (!in.read(magic, sizeof magic)) throw FormatError("vector file too short for magic header");
  if (std::memcmp(magic, kVectorMagic, sizeof magic) != 0) throw FormatError("bad magic bytes in vector file");
  const std::uint32_t rows = get_u32(in, "row count");
  const std::uint32_t dim = get_u32(in, "dimension");
  if (dim == 0) throw FormatError("vector file declares dimension 0");

  const std::uint64_t floats = static_cast<std::uint64_t>(rows) * dim;
  if (const auto here = in.tellg(); here != std::streampos(-1)) {
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    if (static_cast<std::uint64_t>(end - here) < floats * 4)
      throw LengthError("vector file declares " + std::to_string(rows) + " rows of dim " + std::to_string(dim) +
                        " but holds only " + std::to_string(static_cast<std::uint64_t>(end - here) / 4 / dim) +
                        " full rows");
  }
  std::vector<float> data(floats);
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4))
      throw LengthError("vector file declares " + std::to_string(rows) + " rows but float data ends after " +
                        std::to_string(i / dim) + " full rows");
    data[i] = std::bit_cast<float>(static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                                   (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24));
  }
  std::vector<std::string> ids;
  ids.reserve(rows);
  for (std::uint32_t r = 0; r < rows; ++r) {
    const std::uint32_t len = get_u32(in, "id length");
    std::string id(len, '\0');
    if (len > 0 && !in.read(id.data(), len)) throw LengthError("truncated vector file: id " + std::to_string(r));
    ids.push_back(std::move(id));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after vector file id list");
  return EmbeddingMatrix(std::move(ids), dim, std::move(data));
}

void save_vectors(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_vectors(out, matrix);
}

EmbeddingMatrix load_vectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_vectors(in);
}

}  // namespace xdalign
