#include "zeroone/batch_eval.hpp"

#include <cstring>

namespace zeroone {

void batch_eval_scalar(const Circuit& c, const std::uint64_t* input_rows,
                       std::uint64_t* gate_rows, std::uint64_t* out_row) {
  const std::size_t W = kBlockWords;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    std::uint64_t* row = gate_rows + i * W;
    switch (g.kind) {
      case GateKind::Const: {
        const std::uint64_t fill = g.value ? ~std::uint64_t{0} : 0;
        for (std::size_t w = 0; w < W; ++w) row[w] = fill;
        break;
      }
      case GateKind::Lit: {
        const std::uint64_t* src = input_rows + static_cast<std::size_t>(g.var - 1) * W;
        if (g.positive) {
          std::memcpy(row, src, W * sizeof(std::uint64_t));
        } else {
          for (std::size_t w = 0; w < W; ++w) row[w] = ~src[w];
        }
        break;
      }
      case GateKind::And: {
        const std::uint64_t* first = gate_rows + static_cast<std::size_t>(g.children[0]) * W;
        std::memcpy(row, first, W * sizeof(std::uint64_t));
        for (std::size_t k = 1; k < g.children.size(); ++k) {
          const std::uint64_t* src = gate_rows + static_cast<std::size_t>(g.children[k]) * W;
          for (std::size_t w = 0; w < W; ++w) row[w] &= src[w];
        }
        break;
      }
      case GateKind::Or: {
        const std::uint64_t* first = gate_rows + static_cast<std::size_t>(g.children[0]) * W;
        std::memcpy(row, first, W * sizeof(std::uint64_t));
        for (std::size_t k = 1; k < g.children.size(); ++k) {
          const std::uint64_t* src = gate_rows + static_cast<std::size_t>(g.children[k]) * W;
          for (std::size_t w = 0; w < W; ++w) row[w] |= src[w];
        }
        break;
      }
    }
  }
  std::memcpy(out_row, gate_rows + static_cast<std::size_t>(c.output) * W,
              W * sizeof(std::uint64_t));
}

bool batch_kernel_avx2_available() {
#if defined(ZEROONE_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

BatchKernelFn select_batch_kernel(KernelChoice choice) {
  switch (choice) {
    case KernelChoice::Scalar:
      return &batch_eval_scalar;
    case KernelChoice::Avx2:
#if defined(ZEROONE_HAVE_AVX2_TU)
      if (batch_kernel_avx2_available()) return &batch_eval_avx2;
#endif
      throw std::runtime_error("AVX2 kernel not available on this machine");
    case KernelChoice::Auto:
#if defined(ZEROONE_HAVE_AVX2_TU)
      if (batch_kernel_avx2_available()) return &batch_eval_avx2;
#endif
      return &batch_eval_scalar;
  }
  return &batch_eval_scalar;
}

const char* batch_kernel_name(BatchKernelFn fn) {
#if defined(ZEROONE_HAVE_AVX2_TU)
  if (fn == &batch_eval_avx2) return "avx2";
#endif
  return fn == &batch_eval_scalar ? "scalar" : "unknown";
}

}  // namespace zeroone
