#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "zkpc/digest.hpp"
#include "zkpc/image.hpp"
#include "zkpc/isa.hpp"

namespace zkpc {

inline constexpr std::size_t kMemoryDepth = 16;      // data space is 2^16 words
inline constexpr std::uint32_t kInputBase = 0x0100;  // input bytes, one per word
inline constexpr std::size_t kMaxInputBytes = 32768;
inline constexpr std::uint64_t kDefaultMaxSteps = std::uint64_t{1} << 24;

enum class TrapReason {
    IllegalInstruction,
    PcOutOfRange,
    DivideByZero,
    MemoryOutOfRange,
    StepBudgetExhausted,
};
const char* trap_name(TrapReason reason);

class GuestTrap : public std::runtime_error {
public:
    explicit GuestTrap(TrapReason reason);
    TrapReason reason() const { return reason_; }

private:
    TrapReason reason_;
};

/// Per-step memory access record. kind=load keeps old_value = new_value;
/// kind=none leaves address and values unused. At most one access per step.
struct MemOp {
    enum class Kind : std::uint8_t { None = 0, Load = 1, Store = 2 };
    Kind kind = Kind::None;
    std::uint32_t address = 0;
    std::uint32_t old_value = 0;
    std::uint32_t new_value = 0;
};

using RegisterFile = std::array<std::uint32_t, 8>;

/// The slice of machine state a trace row commits to, minus the memory root
/// (maintained by whoever owns the memory representation).
struct StepCore {
    std::uint32_t pc = 0;
    RegisterFile regs{};
    Digest out_acc;
    bool halted = false;
    std::uint32_t exit_code = 0;
};

struct StepResult {
    MemOp memop;
    std::optional<std::uint8_t> output_byte;
    std::optional<TrapReason> trap;
};

/// Executes one instruction over the core fields. Memory reads go through
/// `load`, called with an address already checked to be below 2^16; the
/// caller applies any store in the returned MemOp to its own memory. The
/// core is left untouched when the step traps. pre: !core.halted
StepResult step_core(StepCore& core, const GuestImage& image,
                     const std::function<std::uint32_t(std::uint32_t)>& load);

/// Initial data memory: word 0 holds the input length, word kInputBase+i
/// holds input byte i. pre: input.size() <= kMaxInputBytes
std::map<std::uint32_t, std::uint32_t> init_memory(ByteView input);

/// Full interpreter state with value-level memory (no hashing).
struct MachineState {
    std::uint32_t pc = 0;
    RegisterFile regs{};
    std::unordered_map<std::uint32_t, std::uint32_t> memory;
    Digest out_acc;
    bool halted = false;
    std::uint32_t exit_code = 0;
    std::uint64_t step_count = 0;
};

MachineState boot(const GuestImage& image, ByteView input);

/// One step over a booted state. Traps set halted and leave everything else
/// as it was before the faulting instruction.
StepResult step(MachineState& state, const GuestImage& image);

struct ExecutionResult {
    Bytes output;
    std::uint32_t exit_code = 0;
    std::uint64_t step_count = 0;
    std::optional<TrapReason> trap;
};

/// Runs to halt, trap, or budget exhaustion (itself a trap).
ExecutionResult run(const GuestImage& image, ByteView input,
                    std::uint64_t max_steps = kDefaultMaxSteps);

}  // namespace zkpc
