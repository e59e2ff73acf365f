// AVX2 variant of the bit-sliced evaluator. Compiled with -mavx2 in its own
// translation unit; callers reach it only through select_batch_kernel, which
// checks CPU support first.

#include "zeroone/batch_eval.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

namespace zeroone {

static_assert(kBlockWords == 4, "AVX2 kernel assumes one 256-bit vector per row");

void batch_eval_avx2(const Circuit& c, const std::uint64_t* input_rows,
                     std::uint64_t* gate_rows, std::uint64_t* out_row) {
  const std::size_t W = kBlockWords;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    auto* row = reinterpret_cast<__m256i*>(gate_rows + i * W);
    switch (g.kind) {
      case GateKind::Const:
        _mm256_storeu_si256(row, g.value ? _mm256_set1_epi64x(-1) : _mm256_setzero_si256());
        break;
      case GateKind::Lit: {
        __m256i v = _mm256_loadu_si256(
            reinterpret_cast<const __m256i*>(input_rows + static_cast<std::size_t>(g.var - 1) * W));
        if (!g.positive) v = _mm256_xor_si256(v, _mm256_set1_epi64x(-1));
        _mm256_storeu_si256(row, v);
        break;
      }
      case GateKind::And: {
        __m256i v = _mm256_loadu_si256(
            reinterpret_cast<const __m256i*>(gate_rows + static_cast<std::size_t>(g.children[0]) * W));
        for (std::size_t k = 1; k < g.children.size(); ++k) {
          v = _mm256_and_si256(
              v, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(
                     gate_rows + static_cast<std::size_t>(g.children[k]) * W)));
        }
        _mm256_storeu_si256(row, v);
        break;
      }
      case GateKind::Or: {
        __m256i v = _mm256_loadu_si256(
            reinterpret_cast<const __m256i*>(gate_rows + static_cast<std::size_t>(g.children[0]) * W));
        for (std::size_t k = 1; k < g.children.size(); ++k) {
          v = _mm256_or_si256(
              v, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(
                     gate_rows + static_cast<std::size_t>(g.children[k]) * W)));
        }
        _mm256_storeu_si256(row, v);
        break;
      }
    }
  }
  _mm256_storeu_si256(reinterpret_cast<__m256i*>(out_row),
                      _mm256_loadu_si256(reinterpret_cast<const __m256i*>(
                          gate_rows + static_cast<std::size_t>(c.output) * W)));
}

}  // namespace zeroone

#endif
