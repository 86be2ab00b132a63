#include "efp/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <memory>

#include "efp/errors.hpp"
#include "efp/text_io.hpp"

namespace efp {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

std::string matrix_digest(const Matrix& m) { return sha256_hex(format_matrix(m)); }

std::string problem_digest(const MaskedProblem& mp) {
  return sha256_hex(format_matrix(mp.x1()) + format_matrix(mp.x2()));
}

}  // namespace efp
