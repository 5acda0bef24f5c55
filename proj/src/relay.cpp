#include "relay.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sparkppr {

namespace {

constexpr std::array<std::uint16_t, 256> make_crc_table() {
  std::array<std::uint16_t, 256> table{};
  for (std::uint32_t b = 0; b < 256; ++b) {
    std::uint16_t crc = static_cast<std::uint16_t>(b << 8);
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
    }
    table[b] = crc;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

}  // namespace

std::uint16_t crc16(std::span<const std::uint8_t> data) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t byte : data) {
    crc = static_cast<std::uint16_t>((crc << 8) ^
                                     kCrcTable[((crc >> 8) ^ byte) & 0xFF]);
  }
  return crc;
}

std::vector<std::uint8_t> pack_symbols(std::span<const std::uint32_t> symbols,
                                       std::uint32_t q, SymbolPacking packing) {
  if (packing == SymbolPacking::PackedBits) {
    if (q != 2)
      throw std::invalid_argument("packed-bit serialization requires q = 2");
    std::vector<std::uint8_t> out((symbols.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i]) out[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
    return out;
  }
  if (q > 256)
    throw std::invalid_argument(
        "byte serialization supports fields up to q = 256");
  std::vector<std::uint8_t> out(symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i)
    out[i] = static_cast<std::uint8_t>(symbols[i] & 0xFF);
  return out;
}

std::uint16_t payload_crc(std::span<const std::uint32_t> symbols,
                          std::uint32_t q, SymbolPacking packing) {
  const auto bytes = pack_symbols(symbols, q, packing);
  return crc16(bytes);
}

void ChannelParams::validate(std::uint32_t q) const {
  if (drones == 0) throw std::invalid_argument("channel needs at least one drone");
  if (erasure.size() != drones)
    throw std::invalid_argument("one erasure probability per drone required");
  for (double e : erasure)
    if (!(e >= 0.0 && e <= 1.0))
      throw std::invalid_argument("erasure probabilities must lie in [0, 1]");
  if (!(symbol_error_prob > 0.0 && symbol_error_prob <= 1.0))
    throw std::invalid_argument("symbol error probability must lie in (0, 1]");
  if (payload_len == 0) throw std::invalid_argument("payload length must be positive");
  if (packing == SymbolPacking::PackedBits && q != 2)
    throw std::invalid_argument("packed-bit serialization requires q = 2");
  if (packing == SymbolPacking::ByteRaw && q > 256)
    throw std::invalid_argument("byte serialization supports fields up to q = 256");
}

std::vector<std::uint32_t> inject_errors(std::span<const std::uint32_t> payload,
                                         std::uint32_t q,
                                         double symbol_error_prob, Rng& rng) {
  if (!(symbol_error_prob > 0.0 && symbol_error_prob <= 1.0))
    throw std::invalid_argument("symbol error probability must lie in (0, 1]");
  std::vector<std::uint32_t> out(payload.begin(), payload.end());
  for (;;) {
    bool changed = false;
    for (std::size_t i = 0; i < payload.size(); ++i) {
      if (rng.chance(symbol_error_prob)) {
        const auto offset = 1 + static_cast<std::uint32_t>(rng.below(q - 1));
        out[i] = (payload[i] + offset) % q;
        changed = true;
      } else {
        out[i] = payload[i];
      }
    }
    if (changed) return out;
  }
}

std::vector<std::vector<FramedPacket>> transmit(const FqMatrix& coded,
                                                const ChannelParams& params,
                                                Rng& rng) {
  const std::uint32_t q = coded.field().q();
  params.validate(q);
  if (coded.cols() != params.payload_len)
    throw std::invalid_argument("coded block width does not match payload length");

  std::vector<std::uint16_t> crcs(coded.rows());
  for (std::uint32_t n = 0; n < coded.rows(); ++n)
    crcs[n] = payload_crc(coded.row(n), q, params.packing);

  std::vector<std::vector<FramedPacket>> buffers(params.drones);
  for (std::uint32_t m = 0; m < params.drones; ++m) {
    buffers[m].reserve(coded.rows());
    for (std::uint32_t n = 0; n < coded.rows(); ++n) {
      FramedPacket pkt;
      pkt.index = n;
      pkt.crc = crcs[n];
      if (rng.chance(params.erasure[m])) {
        pkt.payload = inject_errors(coded.row(n), q, params.symbol_error_prob, rng);
        pkt.clean = false;
      } else {
        pkt.payload.assign(coded.row(n).begin(), coded.row(n).end());
        pkt.clean = true;
      }
      buffers[m].push_back(std::move(pkt));
    }
  }
  return buffers;
}

Delivery deliver(const std::vector<std::vector<FramedPacket>>& drone_buffers,
                 const FieldSpec& field, SymbolPacking packing, Rng& rng) {
  if (drone_buffers.empty())
    throw std::invalid_argument("delivery needs at least one drone buffer");
  const std::size_t n = drone_buffers.front().size();
  for (const auto& buf : drone_buffers)
    if (buf.size() != n)
      throw std::invalid_argument("drone buffers must hold the same packets");

  const auto count = static_cast<std::uint32_t>(n);
  const std::uint32_t len =
      n ? static_cast<std::uint32_t>(drone_buffers.front().front().payload.size()) : 0;
  Delivery d{FqMatrix(field, count, len), {}, {}, {}, {}};
  d.crcs.resize(count);
  d.truly_clean.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const FramedPacket* pick = nullptr;
    // First copy that verifies wins; the receiver cannot tell a checksum
    // collision from a clean packet.
    for (const auto& buf : drone_buffers) {
      const FramedPacket& pkt = buf[i];
      if (payload_crc(pkt.payload, field.q(), packing) == pkt.crc) {
        pick = &pkt;
        break;
      }
    }
    if (pick) {
      d.crc_pass.push_back(i);
    } else {
      pick = &drone_buffers[rng.below(drone_buffers.size())][i];
      d.crc_fail.push_back(i);
    }
    for (std::uint32_t c = 0; c < len; ++c) d.stored.set(i, c, pick->payload[c]);
    d.crcs[i] = pick->crc;
    d.truly_clean[i] = pick->clean ? 1 : 0;
  }
  return d;
}

namespace {

void put_be16(std::ostream& out, std::uint16_t v) {
  out.put(static_cast<char>(v >> 8));
  out.put(static_cast<char>(v & 0xFF));
}

void put_be32(std::ostream& out, std::uint32_t v) {
  put_be16(out, static_cast<std::uint16_t>(v >> 16));
  put_be16(out, static_cast<std::uint16_t>(v & 0xFFFF));
}

std::uint16_t get_be16(std::istream& in) {
  const int hi = in.get(), lo = in.get();
  if (hi < 0 || lo < 0) throw std::runtime_error("packet dump truncated");
  return static_cast<std::uint16_t>((hi << 8) | lo);
}

std::uint32_t get_be32(std::istream& in) {
  const std::uint32_t hi = get_be16(in), lo = get_be16(in);
  return (hi << 16) | lo;
}

}  // namespace

void write_packet_dump(std::ostream& out, std::span<const FramedPacket> packets,
                       std::uint32_t q, SymbolPacking packing) {
  for (const FramedPacket& pkt : packets) {
    const auto bytes = pack_symbols(pkt.payload, q, packing);
    if (bytes.size() > 0xFFFF)
      throw std::invalid_argument("packet payload too long for dump format");
    put_be32(out, pkt.index);
    put_be16(out, static_cast<std::uint16_t>(bytes.size()));
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    put_be16(out, pkt.crc);
  }
}

std::vector<FramedPacket> read_packet_dump(std::istream& in, std::uint32_t q,
                                           std::uint32_t payload_len,
                                           SymbolPacking packing) {
  std::vector<FramedPacket> out;
  while (in.peek() != std::char_traits<char>::eof()) {
    FramedPacket pkt;
    pkt.index = get_be32(in);
    const std::uint16_t nbytes = get_be16(in);
    std::vector<std::uint8_t> bytes(nbytes);
    in.read(reinterpret_cast<char*>(bytes.data()), nbytes);
    if (!in) throw std::runtime_error("packet dump truncated");
    if (packing == SymbolPacking::PackedBits) {
      if (nbytes != (payload_len + 7) / 8)
        throw std::runtime_error("packet dump payload length mismatch");
      pkt.payload.resize(payload_len);
      for (std::uint32_t i = 0; i < payload_len; ++i)
        pkt.payload[i] = (bytes[i >> 3] >> (7 - (i & 7))) & 1u;
    } else {
      if (nbytes != payload_len)
        throw std::runtime_error("packet dump payload length mismatch");
      pkt.payload.assign(bytes.begin(), bytes.end());
      for (std::uint32_t s : pkt.payload)
        if (s >= q) throw std::runtime_error("packet dump symbol outside field");
    }
    pkt.crc = get_be16(in);
    pkt.clean = payload_crc(pkt.payload, q, packing) == pkt.crc;
    out.push_back(std::move(pkt));
  }
  return out;
}

}  // namespace sparkppr
