#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace sparkppr {

// Byte serialization of a packet payload for checksumming and dumps.
// ByteRaw stores one byte per symbol (fields up to q = 256 before the
// representation runs out); PackedBits packs binary symbols eight to a
// byte, most significant bit first, zero padded.
enum class SymbolPacking { ByteRaw, PackedBits };

// CRC-16/CCITT-FALSE: polynomial 0x1021, initial value 0xFFFF, no
// reflection, no final xor. Check value over "123456789" is 0x29B1.
std::uint16_t crc16(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> pack_symbols(std::span<const std::uint32_t> symbols,
                                       std::uint32_t q, SymbolPacking packing);
std::uint16_t payload_crc(std::span<const std::uint32_t> symbols,
                          std::uint32_t q, SymbolPacking packing);

struct FramedPacket {
  std::uint32_t index = 0;             // position in the coded block
  std::vector<std::uint32_t> payload;  // field symbols
  std::uint16_t crc = 0;               // transmitter checksum of the clean payload
  bool clean = true;                   // simulation bookkeeping, not visible on air
};

struct ChannelParams {
  std::uint32_t drones = 2;
  std::vector<double> erasure;         // per-drone corruption probability
  double symbol_error_prob = 0.05;     // within a corrupted copy
  std::uint32_t payload_len = 64;      // symbols per packet
  SymbolPacking packing = SymbolPacking::ByteRaw;

  void validate(std::uint32_t q) const;
};

// Corrupts each symbol independently with the given probability, drawing
// replacement offsets uniformly from the nonzero field elements. The whole
// pattern is redrawn until at least one symbol differs, so the output never
// equals the input.
std::vector<std::uint32_t> inject_errors(std::span<const std::uint32_t> payload,
                                         std::uint32_t q,
                                         double symbol_error_prob, Rng& rng);

// Broadcast of the framed coded block to every drone. Each drone holds one
// copy of every packet: clean with probability 1 - erasure[m], otherwise a
// corrupted copy carrying the original checksum.
std::vector<std::vector<FramedPacket>> transmit(const FqMatrix& coded,
                                                const ChannelParams& params,
                                                Rng& rng);

struct Delivery {
  FqMatrix stored;                      // one row per packet, as kept by the receiver
  std::vector<std::uint32_t> crc_pass;  // rows whose checksum verifies
  std::vector<std::uint32_t> crc_fail;  // the complement
  std::vector<std::uint16_t> crcs;      // stored checksum per row
  std::vector<std::uint8_t> truly_clean;  // ground truth per row
};

// Per packet: keep the first copy whose checksum verifies; if none does,
// keep one of the corrupted copies chosen uniformly at random.
Delivery deliver(const std::vector<std::vector<FramedPacket>>& drone_buffers,
                 const FieldSpec& field, SymbolPacking packing, Rng& rng);

// Binary dump of framed packets: per packet a 4-byte big-endian index, a
// 2-byte big-endian payload byte length, the payload bytes, and the 2-byte
// big-endian checksum.
void write_packet_dump(std::ostream& out, std::span<const FramedPacket> packets,
                       std::uint32_t q, SymbolPacking packing);
std::vector<FramedPacket> read_packet_dump(std::istream& in, std::uint32_t q,
                                           std::uint32_t payload_len,
                                           SymbolPacking packing);

}  // namespace sparkppr
