#include "zkpc/receipt.hpp"

#include <algorithm>

#include "zkpc/errors.hpp"
#include "zkpc/io.hpp"

namespace zkpc {

namespace {

constexpr char kMagic[4] = {'Z', 'K', 'P', 'C'};
constexpr std::size_t kMaxPathDepth = 64;

/// Bounds-checked little-endian reader that names the section it is in.
class Reader {
public:
    explicit Reader(ByteView data) : data_(data) {}

    void need(std::size_t n, const std::string& section) {
        if (data_.size() - at_ < n) throw ParseError(section, "truncated");
    }
    std::uint8_t u8(const std::string& section) {
        need(1, section);
        return data_[at_++];
    }
    std::uint16_t u16(const std::string& section) {
        need(2, section);
        auto v = get_u16(data_, at_);
        at_ += 2;
        return v;
    }
    std::uint32_t u32(const std::string& section) {
        need(4, section);
        auto v = get_u32(data_, at_);
        at_ += 4;
        return v;
    }
    std::uint64_t u64(const std::string& section) {
        need(8, section);
        auto v = get_u64(data_, at_);
        at_ += 8;
        return v;
    }
    ByteView bytes(std::size_t n, const std::string& section) {
        need(n, section);
        ByteView v = data_.subspan(at_, n);
        at_ += n;
        return v;
    }
    Digest digest(const std::string& section) {
        ByteView v = bytes(32, section);
        Digest d;
        std::copy(v.begin(), v.end(), d.bytes.begin());
        return d;
    }
    std::size_t remaining() const { return data_.size() - at_; }

private:
    ByteView data_;
    std::size_t at_ = 0;
};

void put_row(Bytes& out, const TraceRow& row) {
    auto wire = row.serialize();
    out.insert(out.end(), wire.begin(), wire.end());
}

void put_path(Bytes& out, const std::vector<Digest>& siblings) {
    put_u16(out, static_cast<std::uint16_t>(siblings.size()));
    for (const Digest& d : siblings) out.insert(out.end(), d.bytes.begin(), d.bytes.end());
}

void put_opening(Bytes& out, const StepOpening& opening) {
    put_u64(out, opening.step_index);
    put_row(out, opening.row_before);
    put_path(out, opening.path_before);
    put_row(out, opening.row_after);
    put_path(out, opening.path_after);
    if (!opening.memory) {
        out.push_back(0);
        return;
    }
    out.push_back(static_cast<std::uint8_t>(opening.memory->kind));
    put_u32(out, opening.memory->address);
    put_u32(out, opening.memory->old_value);
    for (const Digest& d : opening.memory->siblings) {
        out.insert(out.end(), d.bytes.begin(), d.bytes.end());
    }
}

TraceRow read_row(Reader& r, const std::string& section) {
    ByteView bytes = r.bytes(TraceRow::kWireSize, section);
    try {
        return TraceRow::parse(bytes);
    } catch (const ParseError& e) {
        throw ParseError(section, e.what());
    }
}

std::vector<Digest> read_path(Reader& r, const std::string& section) {
    std::uint16_t len = r.u16(section + " length");
    if (len > kMaxPathDepth) throw ParseError(section, "path too deep");
    std::vector<Digest> siblings;
    siblings.reserve(len);
    for (std::uint16_t i = 0; i < len; ++i) siblings.push_back(r.digest(section));
    return siblings;
}

StepOpening read_opening(Reader& r, const std::string& label) {
    StepOpening opening;
    opening.step_index = r.u64(label + " step index");
    opening.row_before = read_row(r, label + " row");
    opening.path_before = read_path(r, label + " row path");
    opening.row_after = read_row(r, label + " successor row");
    opening.path_after = read_path(r, label + " successor path");
    std::uint8_t flag = r.u8(label + " memory flag");
    if (flag > 2) throw ParseError(label + " memory flag", "not 0, 1, or 2");
    if (flag != 0) {
        MemoryWitness mem;
        mem.kind = static_cast<MemOp::Kind>(flag);
        mem.address = r.u32(label + " memory address");
        mem.old_value = r.u32(label + " memory old value");
        mem.siblings.reserve(kMemoryDepth);
        for (std::size_t i = 0; i < kMemoryDepth; ++i) {
            mem.siblings.push_back(r.digest(label + " memory path"));
        }
        opening.memory = std::move(mem);
    }
    return opening;
}

}  // namespace

Digest claim_seed(const ReceiptClaim& claim, std::uint32_t sample_count) {
    return sample_seed(claim.image_id, claim.input_digest, chain_over(as_bytes(claim.output_bytes)),
                       claim.trace_root, claim.trace_len, sample_count);
}

std::vector<std::uint64_t> derive_samples(const ReceiptClaim& claim,
                                          std::uint32_t sample_count) {
    return derive_samples(claim_seed(claim, sample_count), claim.trace_len, sample_count);
}

Bytes serialize_receipt(const Receipt& receipt) {
    Bytes out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, kReceiptFormatVersion);
    out.insert(out.end(), receipt.claim.image_id.bytes.begin(),
               receipt.claim.image_id.bytes.end());
    out.insert(out.end(), receipt.claim.input_digest.bytes.begin(),
               receipt.claim.input_digest.bytes.end());
    put_u32(out, receipt.claim.exit_code);
    put_u64(out, receipt.claim.trace_len);
    out.insert(out.end(), receipt.claim.trace_root.bytes.begin(),
               receipt.claim.trace_root.bytes.end());
    put_u32(out, receipt.sample_count);
    put_u64(out, receipt.claim.output_bytes.size());
    out.insert(out.end(), receipt.claim.output_bytes.begin(),
               receipt.claim.output_bytes.end());
    for (const StepOpening& opening : receipt.sampled) put_opening(out, opening);
    put_opening(out, receipt.final_opening);
    return out;
}

Receipt deserialize_receipt(ByteView data) {
    Reader r(data);
    ByteView magic = r.bytes(4, "magic");
    if (!std::equal(kMagic, kMagic + 4, magic.begin())) {
        throw ParseError("magic", "expected ZKPC");
    }
    if (r.u16("version") != kReceiptFormatVersion) throw ParseError("version", "unsupported");

    Receipt receipt;
    receipt.claim.image_id = r.digest("claim image id");
    receipt.claim.input_digest = r.digest("claim input digest");
    receipt.claim.exit_code = r.u32("claim exit code");
    receipt.claim.trace_len = r.u64("claim trace length");
    if (receipt.claim.trace_len < 2) throw ParseError("claim trace length", "below 2");
    receipt.claim.trace_root = r.digest("claim trace root");
    receipt.sample_count = r.u32("sample count");
    if (receipt.sample_count == 0) throw ParseError("sample count", "zero");
    std::uint64_t output_len = r.u64("output length");
    if (output_len > r.remaining()) throw ParseError("output", "truncated");
    ByteView output = r.bytes(static_cast<std::size_t>(output_len), "output");
    receipt.claim.output_bytes.assign(output.begin(), output.end());

    receipt.sampled.reserve(receipt.sample_count);
    for (std::uint32_t i = 0; i < receipt.sample_count; ++i) {
        receipt.sampled.push_back(read_opening(r, "opening " + std::to_string(i)));
    }
    receipt.final_opening = read_opening(r, "final opening");
    if (r.remaining() != 0) throw ParseError("receipt", "trailing bytes");
    return receipt;
}

void save_receipt(const Receipt& receipt, const std::filesystem::path& path) {
    write_file(path, as_bytes(serialize_receipt(receipt)));
}

Receipt load_receipt(const std::filesystem::path& path) {
    Bytes data = read_file(path);
    return deserialize_receipt(as_bytes(data));
}

}  // namespace zkpc
