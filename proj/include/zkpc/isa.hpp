#pragma once

#include <cstdint>

namespace zkpc {

enum class Opcode : std::uint8_t {
    Halt = 0x00,
    Add = 0x01,
    Sub = 0x02,
    Mul = 0x03,
    Divu = 0x04,
    Remu = 0x05,
    And = 0x06,
    Or = 0x07,
    Xor = 0x08,
    Sll = 0x09,
    Srl = 0x0A,
    Sra = 0x0B,
    Slt = 0x0C,
    Sltu = 0x0D,
    Addi = 0x10,
    Lui = 0x11,
    Lw = 0x12,
    Sw = 0x13,
    Beq = 0x18,
    Bne = 0x19,
    Blt = 0x1A,
    Bltu = 0x1B,
    Jal = 0x1C,
    Jalr = 0x1D,
    Write = 0x20,
    // Decode marker for unknown opcodes or out-of-range register fields;
    // never encoded, consumed by step as a trap.
    Illegal = 0xFF,
};

const char* opcode_name(Opcode op);

// JAL's 24-bit immediate occupies the bits every other format uses for
// register operands, so J-format jumps always link through r5.
inline constexpr std::uint8_t kLinkRegister = 5;

/// Decoded instruction. Field usage by format:
///   R (ADD..SLTU):      rd, rs1, rs2
///   I (ADDI, LUI, LW, JALR): rd, rs1, imm (16-bit signed; LUI ignores rs1)
///   SW:                 rs2 (value, in the rd bit slot), rs1, imm
///   B (BEQ..BLTU):      rs1, rs2, imm (16-bit signed, pc-relative)
///   J (JAL):            imm (24-bit signed, pc-relative), rd fixed to r5
///   HALT / WRITE:       rs1
/// Unused fields are zero in well-formed instructions; encode enforces that.
struct Instruction {
    Opcode opcode = Opcode::Illegal;
    std::uint8_t rd = 0;
    std::uint8_t rs1 = 0;
    std::uint8_t rs2 = 0;
    std::int32_t imm = 0;

    bool operator==(const Instruction&) const = default;
};

/// Bit layout: opcode 31..24; R-format rd 23..20, rs1 19..16, rs2 15..12;
/// I-format rd 23..20, rs1 19..16, imm16 15..0; B-format rs1 23..20,
/// rs2 19..16, imm16 15..0; J-format imm24 23..0 sign-extended.
/// Throws std::invalid_argument when a field is out of range for the format.
std::uint32_t encode(const Instruction& instr);

/// Total: unknown opcodes and register fields >= 8 yield Opcode::Illegal.
Instruction decode(std::uint32_t word);

inline bool is_memory_opcode(Opcode op) { return op == Opcode::Lw || op == Opcode::Sw; }

}  // namespace zkpc
