#include "zkpc/guest_asm.hpp"

#include <map>

namespace zkpc {

namespace {

bool is_branch(Opcode op) {
    return op == Opcode::Beq || op == Opcode::Bne || op == Opcode::Blt ||
           op == Opcode::Bltu;
}

}  // namespace

GuestImage assemble(const AsmUnit& unit) {
    std::map<std::string, std::uint32_t> labels;
    std::uint32_t address = 0;
    for (const AsmUnit::Item& item : unit.items) {
        if (!item.label.empty()) {
            if (!labels.emplace(item.label, address).second) {
                throw AsmError("duplicate label: " + item.label);
            }
        } else {
            address += 1;
        }
    }
    if (address > kMaxCodeWords) throw AsmError("program exceeds the code space");

    auto resolve = [&labels](const std::string& name) {
        auto it = labels.find(name);
        if (it == labels.end()) throw AsmError("undefined label: " + name);
        return it->second;
    };

    GuestImage image;
    image.code.reserve(address);
    for (const AsmUnit::Item& item : unit.items) {
        if (!item.label.empty()) continue;
        Instruction ins = item.ins;
        if (!item.target.empty()) {
            std::uint32_t pc = static_cast<std::uint32_t>(image.code.size());
            std::int64_t disp;
            std::int64_t lo, hi;
            if (is_branch(ins.opcode)) {
                disp = static_cast<std::int64_t>(resolve(item.target)) - (pc + 1);
                lo = -32768, hi = 32767;
            } else if (ins.opcode == Opcode::Jal) {
                disp = static_cast<std::int64_t>(resolve(item.target)) - pc;
                lo = -(1 << 23), hi = (1 << 23) - 1;
            } else {
                throw AsmError("label operand on a non-control instruction");
            }
            if (disp < lo || disp > hi) {
                throw AsmError("displacement to " + item.target +
                               " does not fit the immediate");
            }
            ins.imm = static_cast<std::int32_t>(disp);
        }
        image.code.push_back(encode(ins));
    }

    if (!unit.entry_label.empty()) {
        image.entry_pc = resolve(unit.entry_label);
    } else if (labels.count("main")) {
        image.entry_pc = labels.at("main");
    } else {
        image.entry_pc = 0;
    }
    return image;
}

}  // namespace zkpc
