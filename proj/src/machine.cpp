#include "zkpc/machine.hpp"

#include "zkpc/transcript.hpp"

namespace zkpc {

const char* trap_name(TrapReason reason) {
    switch (reason) {
        case TrapReason::IllegalInstruction: return "IllegalInstruction";
        case TrapReason::PcOutOfRange: return "PcOutOfRange";
        case TrapReason::DivideByZero: return "DivideByZero";
        case TrapReason::MemoryOutOfRange: return "MemoryOutOfRange";
        case TrapReason::StepBudgetExhausted: return "StepBudgetExhausted";
    }
    return "UnknownTrap";
}

GuestTrap::GuestTrap(TrapReason reason)
    : std::runtime_error(std::string("guest trap: ") + trap_name(reason)), reason_(reason) {}

StepResult step_core(StepCore& core, const GuestImage& image,
                     const std::function<std::uint32_t(std::uint32_t)>& load) {
    StepResult result;
    auto trap = [&result](TrapReason r) {
        result.trap = r;
        return result;
    };

    if (core.pc >= image.code.size()) return trap(TrapReason::PcOutOfRange);
    Instruction instr = decode(image.code[core.pc]);
    if (instr.opcode == Opcode::Illegal) return trap(TrapReason::IllegalInstruction);

    auto reg = [&core](std::uint8_t r) -> std::uint32_t {
        return r == 0 ? 0 : core.regs[r];
    };
    std::uint32_t a = reg(instr.rs1);
    std::uint32_t b = reg(instr.rs2);
    std::uint32_t imm = static_cast<std::uint32_t>(instr.imm);

    std::uint32_t next_pc = core.pc + 1;
    std::optional<std::uint32_t> write_value;  // into rd when set

    switch (instr.opcode) {
        case Opcode::Halt:
            core.halted = true;
            core.exit_code = a;
            return result;  // pc unchanged on HALT
        case Opcode::Add: write_value = a + b; break;
        case Opcode::Sub: write_value = a - b; break;
        case Opcode::Mul: write_value = a * b; break;
        case Opcode::Divu:
            if (b == 0) return trap(TrapReason::DivideByZero);
            write_value = a / b;
            break;
        case Opcode::Remu:
            if (b == 0) return trap(TrapReason::DivideByZero);
            write_value = a % b;
            break;
        case Opcode::And: write_value = a & b; break;
        case Opcode::Or: write_value = a | b; break;
        case Opcode::Xor: write_value = a ^ b; break;
        case Opcode::Sll: write_value = a << (b & 31); break;
        case Opcode::Srl: write_value = a >> (b & 31); break;
        case Opcode::Sra:
            write_value = static_cast<std::uint32_t>(static_cast<std::int32_t>(a) >>
                                                     (b & 31));
            break;
        case Opcode::Slt:
            write_value = static_cast<std::int32_t>(a) < static_cast<std::int32_t>(b) ? 1 : 0;
            break;
        case Opcode::Sltu: write_value = a < b ? 1 : 0; break;
        case Opcode::Addi: write_value = a + imm; break;
        case Opcode::Lui: write_value = (imm & 0xFFFF) << 16; break;
        case Opcode::Lw: {
            std::uint32_t address = a + imm;
            if (address >= (1u << kMemoryDepth)) return trap(TrapReason::MemoryOutOfRange);
            std::uint32_t value = load(address);
            write_value = value;
            result.memop = {MemOp::Kind::Load, address, value, value};
            break;
        }
        case Opcode::Sw: {
            std::uint32_t address = a + imm;
            if (address >= (1u << kMemoryDepth)) return trap(TrapReason::MemoryOutOfRange);
            std::uint32_t old_value = load(address);
            result.memop = {MemOp::Kind::Store, address, old_value, b};
            break;
        }
        case Opcode::Beq:
            if (a == b) next_pc = core.pc + 1 + imm;
            break;
        case Opcode::Bne:
            if (a != b) next_pc = core.pc + 1 + imm;
            break;
        case Opcode::Blt:
            if (static_cast<std::int32_t>(a) < static_cast<std::int32_t>(b)) {
                next_pc = core.pc + 1 + imm;
            }
            break;
        case Opcode::Bltu:
            if (a < b) next_pc = core.pc + 1 + imm;
            break;
        case Opcode::Jal:
            write_value = core.pc + 1;
            next_pc = core.pc + imm;
            break;
        case Opcode::Jalr:
            write_value = core.pc + 1;
            next_pc = a + imm;
            break;
        case Opcode::Write: {
            auto byte = static_cast<std::uint8_t>(a & 0xFF);
            core.out_acc = chain_extend(core.out_acc, byte);
            result.output_byte = byte;
            break;
        }
        case Opcode::Illegal:
            return trap(TrapReason::IllegalInstruction);
    }

    if (write_value && instr.rd != 0) core.regs[instr.rd] = *write_value;
    core.pc = next_pc;
    return result;
}

std::map<std::uint32_t, std::uint32_t> init_memory(ByteView input) {
    if (input.size() > kMaxInputBytes) {
        throw std::invalid_argument("input exceeds " + std::to_string(kMaxInputBytes) +
                                    " bytes");
    }
    std::map<std::uint32_t, std::uint32_t> words;
    words[0] = static_cast<std::uint32_t>(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        words[kInputBase + static_cast<std::uint32_t>(i)] = input[i];
    }
    return words;
}

MachineState boot(const GuestImage& image, ByteView input) {
    MachineState state;
    state.pc = image.entry_pc;
    state.out_acc = chain_init();
    for (auto [address, value] : init_memory(input)) state.memory[address] = value;
    return state;
}

StepResult step(MachineState& state, const GuestImage& image) {
    if (state.halted) return {};
    StepCore core{state.pc, state.regs, state.out_acc, state.halted, state.exit_code};
    StepResult result = step_core(core, image, [&state](std::uint32_t address) {
        auto it = state.memory.find(address);
        return it == state.memory.end() ? 0u : it->second;
    });
    if (result.trap) {
        state.halted = true;
        return result;
    }
    if (result.memop.kind == MemOp::Kind::Store) {
        state.memory[result.memop.address] = result.memop.new_value;
    }
    state.pc = core.pc;
    state.regs = core.regs;
    state.out_acc = core.out_acc;
    state.halted = core.halted;
    state.exit_code = core.exit_code;
    state.step_count += 1;
    return result;
}

ExecutionResult run(const GuestImage& image, ByteView input, std::uint64_t max_steps) {
    MachineState state = boot(image, input);
    ExecutionResult out;
    while (!state.halted) {
        if (state.step_count >= max_steps) {
            out.trap = TrapReason::StepBudgetExhausted;
            break;
        }
        StepResult r = step(state, image);
        if (r.trap) {
            out.trap = r.trap;
            break;
        }
        if (r.output_byte) out.output.push_back(*r.output_byte);
    }
    out.exit_code = state.exit_code;
    out.step_count = state.step_count;
    return out;
}

}  // namespace zkpc
