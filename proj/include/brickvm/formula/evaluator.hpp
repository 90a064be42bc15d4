#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "brickvm/formula/tree.hpp"
#include "brickvm/formula/value.hpp"
#include "brickvm/formula/vocabulary.hpp"

namespace brickvm::formula {

using VariableMap = std::map<std::string, Value, std::less<>>;
using ListMap = std::map<std::string, std::vector<Value>, std::less<>>;

/// Seeded generator behind `random(a, b)`. The state is fully described by
/// (seed, draws), which is what runtime state hashes record.
class Random {
public:
    explicit Random(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        ++draws_;
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t draws() const noexcept { return draws_; }

private:
    std::uint64_t seed_;
    std::uint64_t draws_ = 0;
    std::mt19937_64 engine_;
};

struct EvalContext {
    ObjectProperties object{};
    SensorValues sensors{};
    const VariableMap* local_variables = nullptr;
    const VariableMap* global_variables = nullptr;
    const ListMap* local_lists = nullptr;
    const ListMap* global_lists = nullptr;
    Random* random = nullptr;
    /// Receives non-fatal notes such as division by zero; may be null.
    std::function<void(const std::string&)> diagnostic;
};

/// Evaluates a tree. Never throws for a well-formed tree: degenerate math
/// yields defined values (x/0 = 0, sqrt(-1) = 0, ln(0) = 0, NaN = 0).
Value evaluate(const FormulaTree& tree, EvalContext& ctx);

}  // namespace brickvm::formula
