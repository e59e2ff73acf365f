#pragma once

#include <cstdint>
#include <vector>

#include "zeroone/circuit.hpp"

namespace zeroone {

// Bit-sliced circuit evaluation: a block packs kBlockBits assignments
// column-wise, one row of kBlockWords words per input variable, and every
// gate is one bitwise op over rows. The scalar kernel is the reference; the
// AVX2 kernel is selected at runtime and equivalence-tested against it.

inline constexpr std::size_t kBlockWords = 4;
inline constexpr std::size_t kBlockBits = kBlockWords * 64;

/// Row-per-variable bit matrix for one block of assignments.
class AssignmentBlock {
 public:
  explicit AssignmentBlock(std::uint32_t num_inputs)
      : num_inputs_(num_inputs), rows_(static_cast<std::size_t>(num_inputs) * kBlockWords, 0) {}

  std::uint32_t num_inputs() const { return num_inputs_; }
  const std::uint64_t* rows() const { return rows_.data(); }

  void clear() { std::fill(rows_.begin(), rows_.end(), 0); }

  /// Sets variable `var` (1-based) true in assignment column `column`.
  void set(std::uint32_t var, std::size_t column) {
    rows_[static_cast<std::size_t>(var - 1) * kBlockWords + column / 64] |=
        std::uint64_t{1} << (column % 64);
  }

 private:
  std::uint32_t num_inputs_;
  std::vector<std::uint64_t> rows_;
};

using BatchKernelFn = void (*)(const Circuit& c, const std::uint64_t* input_rows,
                               std::uint64_t* gate_rows, std::uint64_t* out_row);

/// Reference kernel: plain uint64 loops.
void batch_eval_scalar(const Circuit& c, const std::uint64_t* input_rows,
                       std::uint64_t* gate_rows, std::uint64_t* out_row);

/// True when the AVX2 kernel was compiled in and the CPU supports it.
bool batch_kernel_avx2_available();

#if defined(ZEROONE_HAVE_AVX2_TU)
void batch_eval_avx2(const Circuit& c, const std::uint64_t* input_rows, std::uint64_t* gate_rows,
                     std::uint64_t* out_row);
#endif

enum class KernelChoice { Auto, Scalar, Avx2 };

/// Runtime dispatch; Auto picks the widest kernel the CPU supports.
BatchKernelFn select_batch_kernel(KernelChoice choice = KernelChoice::Auto);
const char* batch_kernel_name(BatchKernelFn fn);

/// Owns the per-gate scratch rows for repeated block evaluation of one circuit.
class BatchEvaluator {
 public:
  explicit BatchEvaluator(const Circuit& c, KernelChoice choice = KernelChoice::Auto)
      : circuit_(&c),
        kernel_(select_batch_kernel(choice)),
        scratch_(c.gates.size() * kBlockWords, 0) {}

  /// Evaluates the whole block; out[w] bit b = circuit value on assignment 64w+b.
  void eval_block(const AssignmentBlock& block, std::uint64_t out[kBlockWords]) {
    kernel_(*circuit_, block.rows(), scratch_.data(), out);
  }

  const char* kernel_name() const { return batch_kernel_name(kernel_); }

 private:
  const Circuit* circuit_;
  BatchKernelFn kernel_;
  std::vector<std::uint64_t> scratch_;
};

}  // namespace zeroone
