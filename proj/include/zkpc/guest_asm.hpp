#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "zkpc/image.hpp"
#include "zkpc/isa.hpp"

namespace zkpc {

class AsmError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear program with symbolic control flow, the unit the compiler hands
/// to the assembler. Branch and jump displacements stay symbolic until
/// layout time.
struct AsmUnit {
    struct Item {
        std::string label;   // nonempty: a label definition, no code emitted
        Instruction ins{};   // meaningful when label is empty
        std::string target;  // nonempty: imm is patched to reach this label
    };

    std::vector<Item> items;
    // Entry point label. Empty falls back to "main" when defined, else
    // word 0.
    std::string entry_label;

    void label(std::string name) { items.push_back({std::move(name), {}, {}}); }
    void emit(const Instruction& ins) { items.push_back({{}, ins, {}}); }
    void emit_branch(Opcode op, std::uint8_t rs1, std::uint8_t rs2, std::string target) {
        items.push_back({{}, Instruction{op, 0, rs1, rs2, 0}, std::move(target)});
    }
    void emit_jump(std::string target) {
        items.push_back({{}, Instruction{Opcode::Jal, kLinkRegister, 0, 0, 0},
                         std::move(target)});
    }
};

/// Two-pass layout. Branches get imm = target - (pc + 1), JAL gets
/// imm = target - pc. errors: AsmError on duplicate or undefined labels and
/// on displacements that do not fit their immediate field.
GuestImage assemble(const AsmUnit& unit);

}  // namespace zkpc
