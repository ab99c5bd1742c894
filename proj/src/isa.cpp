#include "zkpc/isa.hpp"

#include <stdexcept>
#include <string>

namespace zkpc {

namespace {

enum class Format { R, I, Store, Branch, Jump, Rs1Only };

bool known_opcode(std::uint8_t op) {
    return op <= 0x0D || (op >= 0x10 && op <= 0x13) || (op >= 0x18 && op <= 0x1D) ||
           op == 0x20;
}

Format format_of(Opcode op) {
    switch (op) {
        case Opcode::Halt:
        case Opcode::Write:
            return Format::Rs1Only;
        case Opcode::Addi:
        case Opcode::Lui:
        case Opcode::Lw:
        case Opcode::Jalr:
            return Format::I;
        case Opcode::Sw:
            return Format::Store;
        case Opcode::Beq:
        case Opcode::Bne:
        case Opcode::Blt:
        case Opcode::Bltu:
            return Format::Branch;
        case Opcode::Jal:
            return Format::Jump;
        default:
            return Format::R;
    }
}

std::int32_t sext16(std::uint32_t bits) {
    return static_cast<std::int16_t>(bits & 0xFFFF);
}

std::int32_t sext24(std::uint32_t bits) {
    return static_cast<std::int32_t>((bits & 0xFFFFFF) << 8) >> 8;
}

[[noreturn]] void bad_field(const char* what, Opcode op) {
    throw std::invalid_argument(std::string("encode ") + opcode_name(op) + ": " + what);
}

void require_reg(std::uint8_t r, const char* name, Opcode op) {
    if (r >= 8) bad_field((std::string(name) + " out of range").c_str(), op);
}

void require_zero(std::uint8_t r, const char* name, Opcode op) {
    if (r != 0) bad_field((std::string(name) + " unused but nonzero").c_str(), op);
}

void require_imm16(std::int32_t imm, Opcode op) {
    if (imm < -32768 || imm > 32767) bad_field("imm16 overflow", op);
}

}  // namespace

const char* opcode_name(Opcode op) {
    switch (op) {
        case Opcode::Halt: return "HALT";
        case Opcode::Add: return "ADD";
        case Opcode::Sub: return "SUB";
        case Opcode::Mul: return "MUL";
        case Opcode::Divu: return "DIVU";
        case Opcode::Remu: return "REMU";
        case Opcode::And: return "AND";
        case Opcode::Or: return "OR";
        case Opcode::Xor: return "XOR";
        case Opcode::Sll: return "SLL";
        case Opcode::Srl: return "SRL";
        case Opcode::Sra: return "SRA";
        case Opcode::Slt: return "SLT";
        case Opcode::Sltu: return "SLTU";
        case Opcode::Addi: return "ADDI";
        case Opcode::Lui: return "LUI";
        case Opcode::Lw: return "LW";
        case Opcode::Sw: return "SW";
        case Opcode::Beq: return "BEQ";
        case Opcode::Bne: return "BNE";
        case Opcode::Blt: return "BLT";
        case Opcode::Bltu: return "BLTU";
        case Opcode::Jal: return "JAL";
        case Opcode::Jalr: return "JALR";
        case Opcode::Write: return "WRITE";
        case Opcode::Illegal: return "ILLEGAL";
    }
    return "ILLEGAL";
}

std::uint32_t encode(const Instruction& instr) {
    Opcode op = instr.opcode;
    if (op == Opcode::Illegal || !known_opcode(static_cast<std::uint8_t>(op))) {
        throw std::invalid_argument("encode: illegal opcode");
    }
    std::uint32_t word = static_cast<std::uint32_t>(op) << 24;
    switch (format_of(op)) {
        case Format::R:
            require_reg(instr.rd, "rd", op);
            require_reg(instr.rs1, "rs1", op);
            require_reg(instr.rs2, "rs2", op);
            if (instr.imm != 0) bad_field("imm unused but nonzero", op);
            word |= static_cast<std::uint32_t>(instr.rd) << 20;
            word |= static_cast<std::uint32_t>(instr.rs1) << 16;
            word |= static_cast<std::uint32_t>(instr.rs2) << 12;
            break;
        case Format::I:
            require_reg(instr.rd, "rd", op);
            require_reg(instr.rs1, "rs1", op);
            require_zero(instr.rs2, "rs2", op);
            require_imm16(instr.imm, op);
            word |= static_cast<std::uint32_t>(instr.rd) << 20;
            word |= static_cast<std::uint32_t>(instr.rs1) << 16;
            word |= static_cast<std::uint32_t>(instr.imm) & 0xFFFF;
            break;
        case Format::Store:
            require_reg(instr.rs2, "rs2", op);
            require_reg(instr.rs1, "rs1", op);
            require_zero(instr.rd, "rd", op);
            require_imm16(instr.imm, op);
            word |= static_cast<std::uint32_t>(instr.rs2) << 20;
            word |= static_cast<std::uint32_t>(instr.rs1) << 16;
            word |= static_cast<std::uint32_t>(instr.imm) & 0xFFFF;
            break;
        case Format::Branch:
            require_reg(instr.rs1, "rs1", op);
            require_reg(instr.rs2, "rs2", op);
            require_zero(instr.rd, "rd", op);
            require_imm16(instr.imm, op);
            word |= static_cast<std::uint32_t>(instr.rs1) << 20;
            word |= static_cast<std::uint32_t>(instr.rs2) << 16;
            word |= static_cast<std::uint32_t>(instr.imm) & 0xFFFF;
            break;
        case Format::Jump:
            if (instr.rd != kLinkRegister) bad_field("rd must be the link register", op);
            require_zero(instr.rs1, "rs1", op);
            require_zero(instr.rs2, "rs2", op);
            if (instr.imm < -(1 << 23) || instr.imm >= (1 << 23)) bad_field("imm24 overflow", op);
            word |= static_cast<std::uint32_t>(instr.imm) & 0xFFFFFF;
            break;
        case Format::Rs1Only:
            require_reg(instr.rs1, "rs1", op);
            require_zero(instr.rd, "rd", op);
            require_zero(instr.rs2, "rs2", op);
            if (instr.imm != 0) bad_field("imm unused but nonzero", op);
            word |= static_cast<std::uint32_t>(instr.rs1) << 16;
            break;
    }
    return word;
}

Instruction decode(std::uint32_t word) {
    auto op_bits = static_cast<std::uint8_t>(word >> 24);
    if (!known_opcode(op_bits)) return Instruction{};
    auto op = static_cast<Opcode>(op_bits);

    Instruction instr;
    instr.opcode = op;
    auto field = [word](int shift) { return static_cast<std::uint8_t>((word >> shift) & 0xF); };
    bool ok = true;
    auto reg = [&ok](std::uint8_t r) {
        if (r >= 8) ok = false;
        return r;
    };
    switch (format_of(op)) {
        case Format::R:
            instr.rd = reg(field(20));
            instr.rs1 = reg(field(16));
            instr.rs2 = reg(field(12));
            break;
        case Format::I:
            instr.rd = reg(field(20));
            instr.rs1 = reg(field(16));
            instr.imm = sext16(word);
            break;
        case Format::Store:
            instr.rs2 = reg(field(20));
            instr.rs1 = reg(field(16));
            instr.imm = sext16(word);
            break;
        case Format::Branch:
            instr.rs1 = reg(field(20));
            instr.rs2 = reg(field(16));
            instr.imm = sext16(word);
            break;
        case Format::Jump:
            instr.rd = kLinkRegister;
            instr.imm = sext24(word);
            break;
        case Format::Rs1Only:
            instr.rs1 = reg(field(16));
            break;
    }
    if (!ok) return Instruction{};
    return instr;
}

}  // namespace zkpc
