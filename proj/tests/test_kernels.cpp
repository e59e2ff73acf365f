#include <cstring>
#include <string>

#include "doctest.h"
#include "support/fuzz.hpp"
#include "zeroone/batch_eval.hpp"
#include "zeroone/rng.hpp"

using namespace zeroone;
using namespace zeroone::testsupport;

namespace {

// Reference: evaluate every column one assignment at a time.
void eval_block_reference(const Circuit& c, const AssignmentBlock& block,
                          std::uint64_t out[kBlockWords]) {
  std::memset(out, 0, kBlockWords * sizeof(std::uint64_t));
  std::vector<std::uint8_t> assignment(c.num_inputs, 0);
  for (std::size_t column = 0; column < kBlockBits; ++column) {
    for (std::uint32_t v = 1; v <= c.num_inputs; ++v) {
      assignment[v - 1] =
          (block.rows()[static_cast<std::size_t>(v - 1) * kBlockWords + column / 64] >>
           (column % 64)) &
          1;
    }
    if (eval_circuit(c, assignment)) out[column / 64] |= std::uint64_t{1} << (column % 64);
  }
}

AssignmentBlock random_block(std::uint32_t m, RngStream& rng) {
  AssignmentBlock block(m);
  for (std::uint32_t v = 1; v <= m; ++v) {
    for (std::size_t column = 0; column < kBlockBits; ++column) {
      if (rng.uniform_below(2)) block.set(v, column);
    }
  }
  return block;
}

}  // namespace

TEST_CASE("scalar batch kernel matches per-assignment evaluation") {
  RngStream rng(1234);
  for (int round = 0; round < 40; ++round) {
    RngStream r = rng.branch(round);
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(r.uniform_below(16));
    const Circuit c = random_circuit(r, m, 4);
    const AssignmentBlock block = random_block(m, r);

    std::uint64_t expected[kBlockWords];
    eval_block_reference(c, block, expected);

    std::vector<std::uint64_t> scratch(c.gates.size() * kBlockWords);
    std::uint64_t got[kBlockWords];
    batch_eval_scalar(c, block.rows(), scratch.data(), got);
    for (std::size_t w = 0; w < kBlockWords; ++w) CHECK(got[w] == expected[w]);
  }
}

TEST_CASE("avx2 kernel is bit-identical to the scalar kernel when available") {
  if (!batch_kernel_avx2_available()) {
    MESSAGE("AVX2 not available on this machine; dispatch falls back to scalar");
    return;
  }
#if defined(ZEROONE_HAVE_AVX2_TU)
  RngStream rng(5678);
  for (int round = 0; round < 60; ++round) {
    RngStream r = rng.branch(round);
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(r.uniform_below(24));
    const Circuit c = random_circuit(r, m, 5);
    const AssignmentBlock block = random_block(m, r);

    std::vector<std::uint64_t> scratch(c.gates.size() * kBlockWords);
    std::uint64_t scalar_out[kBlockWords];
    std::uint64_t avx2_out[kBlockWords];
    batch_eval_scalar(c, block.rows(), scratch.data(), scalar_out);
    batch_eval_avx2(c, block.rows(), scratch.data(), avx2_out);
    for (std::size_t w = 0; w < kBlockWords; ++w) CHECK(avx2_out[w] == scalar_out[w]);
  }
#endif
}

TEST_CASE("kernel dispatch") {
  const BatchKernelFn auto_fn = select_batch_kernel(KernelChoice::Auto);
  const std::string name = batch_kernel_name(auto_fn);
  CHECK((name == "avx2" || name == "scalar"));
  if (batch_kernel_avx2_available()) {
    CHECK(name == "avx2");
  } else {
    CHECK(name == "scalar");
    CHECK_THROWS(select_batch_kernel(KernelChoice::Avx2));
  }
  CHECK(batch_kernel_name(select_batch_kernel(KernelChoice::Scalar)) == std::string("scalar"));
}

TEST_CASE("BatchEvaluator wraps the dispatch with scratch reuse") {
  RngStream rng(9);
  const Circuit c = random_circuit(rng, 8, 3);
  BatchEvaluator auto_eval(c);
  BatchEvaluator scalar_eval(c, KernelChoice::Scalar);
  const AssignmentBlock block = random_block(8, rng);
  std::uint64_t a[kBlockWords];
  std::uint64_t b[kBlockWords];
  auto_eval.eval_block(block, a);
  scalar_eval.eval_block(block, b);
  for (std::size_t w = 0; w < kBlockWords; ++w) CHECK(a[w] == b[w]);
}
