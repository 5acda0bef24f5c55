#include "doctest.h"

#include <cmath>
#include <sstream>

#include "relay.hpp"

using namespace sparkppr;

namespace {

// Bit-serial reference implementation: polynomial 0x1021, init 0xFFFF, no
// reflection, no final xor. Independent of the table-driven routine.
std::uint16_t crc16_reference(std::span<const std::uint8_t> data) {
  std::uint16_t crc = 0xFFFF;
  for (std::uint8_t byte : data) {
    crc ^= static_cast<std::uint16_t>(byte << 8);
    for (int i = 0; i < 8; ++i)
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
  }
  return crc;
}

}  // namespace

TEST_CASE("checksum matches the published check value") {
  const std::uint8_t check[] = {'1', '2', '3', '4', '5', '6', '7', '8', '9'};
  CHECK(crc16_reference(check) == 0x29B1);  // reference agrees with the books
  CHECK(crc16(check) == 0x29B1);
}

TEST_CASE("checksum agrees with the bit-serial reference") {
  Rng rng(101);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::uint8_t> data(rng.below(40));
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.below(256));
    CHECK(crc16(data) == crc16_reference(data));
  }
}

TEST_CASE("empty payload checksum is stable") {
  const std::vector<std::uint8_t> empty;
  CHECK(crc16(empty) == 0xFFFF);  // init state, nothing folded in
  CHECK(crc16(empty) == crc16_reference(empty));
}

TEST_CASE("any single-symbol change flips the checksum") {
  Rng rng(103);
  int missed = 0;
  for (int i = 0; i < 10000; ++i) {
    std::vector<std::uint32_t> payload(64);
    for (auto& s : payload) s = static_cast<std::uint32_t>(rng.below(251));
    const std::uint16_t before = payload_crc(payload, 251, SymbolPacking::ByteRaw);
    const auto pos = rng.below(payload.size());
    const auto old = payload[pos];
    payload[pos] = (old + 1 + rng.below(250)) % 251;
    const std::uint16_t after = payload_crc(payload, 251, SymbolPacking::ByteRaw);
    missed += before == after;
  }
  CHECK(missed == 0);
}

TEST_CASE("symbol packing") {
  const std::vector<std::uint32_t> bits{1, 0, 1, 1, 0, 0, 1, 0, 1};
  const auto packed = pack_symbols(bits, 2, SymbolPacking::PackedBits);
  REQUIRE(packed.size() == 2);
  CHECK(packed[0] == 0xB2);  // 1011 0010
  CHECK(packed[1] == 0x80);  // final bit, zero padded
  const auto raw = pack_symbols(bits, 2, SymbolPacking::ByteRaw);
  REQUIRE(raw.size() == 9);
  CHECK(raw[0] == 1);
  CHECK_THROWS_AS(pack_symbols(bits, 3, SymbolPacking::PackedBits),
                  std::invalid_argument);
  const std::vector<std::uint32_t> wide{300};
  CHECK_THROWS_AS(pack_symbols(wide, 65521, SymbolPacking::ByteRaw),
                  std::invalid_argument);
}

TEST_CASE("error injection always changes the payload") {
  Rng rng(107);
  const std::vector<std::uint32_t> payload(64, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto out = inject_errors(payload, 2, 0.01, rng);
    bool differs = false;
    for (std::size_t j = 0; j < out.size(); ++j) differs |= out[j] != payload[j];
    CHECK(differs);
    for (std::uint32_t s : out) CHECK(s < 2);
  }
}

TEST_CASE("error injection matches the conditional binomial mean") {
  Rng rng(109);
  const std::uint32_t len = 64;
  const double ps = 0.05;
  std::vector<std::uint32_t> payload(len, 0);
  std::uint64_t weight = 0;
  const int rounds = 100000;
  for (int i = 0; i < rounds; ++i) {
    const auto out = inject_errors(payload, 2, ps, rng);
    for (std::uint32_t s : out) weight += s != 0;
  }
  // mean weight of Binomial(len, ps) conditioned on >= 1
  const double expect = len * ps / (1.0 - std::pow(1.0 - ps, len));
  const double got = static_cast<double>(weight) / rounds;
  CHECK(got == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("transmission delivers clean copies at the survival rate") {
  Rng rng(113);
  const FieldSpec f2(2);
  ChannelParams params;
  params.drones = 2;
  params.erasure = {0.3, 0.7};
  params.payload_len = 16;
  const std::uint32_t packets = 1000;
  const FqMatrix coded = FqMatrix::random(f2, packets, 16, rng);
  std::uint64_t clean[2] = {0, 0};
  const int rounds = 100;
  for (int i = 0; i < rounds; ++i) {
    const auto buffers = transmit(coded, params, rng);
    for (int m = 0; m < 2; ++m)
      for (const auto& pkt : buffers[m]) clean[m] += pkt.clean;
  }
  const double total = static_cast<double>(packets) * rounds;
  CHECK(clean[0] / total == doctest::Approx(0.7).epsilon(0.015));
  CHECK(clean[1] / total == doctest::Approx(0.3).epsilon(0.035));
}

TEST_CASE("degenerate erasure rates") {
  Rng rng(127);
  const FieldSpec f2(2);
  const FqMatrix coded = FqMatrix::random(f2, 10, 8, rng);
  ChannelParams clean_params;
  clean_params.drones = 2;
  clean_params.erasure = {0.0, 0.0};
  clean_params.payload_len = 8;
  for (const auto& buf : transmit(coded, clean_params, rng))
    for (const auto& pkt : buf) CHECK(pkt.clean);
  ChannelParams dead_params = clean_params;
  dead_params.erasure = {1.0, 1.0};
  for (const auto& buf : transmit(coded, dead_params, rng))
    for (const auto& pkt : buf) CHECK(!pkt.clean);
}

TEST_CASE("delivery keeps a verified copy whenever one exists") {
  Rng rng(131);
  const FieldSpec f2(2);
  ChannelParams params;
  params.drones = 2;
  params.erasure = {0.8, 0.8};
  params.payload_len = 32;
  const FqMatrix coded = FqMatrix::random(f2, 200, 32, rng);
  std::uint64_t failed = 0, total = 0;
  const int rounds = 500;
  for (int i = 0; i < rounds; ++i) {
    const auto buffers = transmit(coded, params, rng);
    const Delivery d = deliver(buffers, f2, params.packing, rng);
    // pass/fail split covers all rows exactly once, in order
    CHECK(d.crc_pass.size() + d.crc_fail.size() == 200);
    failed += d.crc_fail.size();
    total += 200;
    for (std::uint32_t r : d.crc_pass) {
      // a passing row is the transmitted packet (checksum collisions aside)
      bool equal = true;
      for (std::uint32_t c = 0; c < 32; ++c)
        equal &= d.stored.at(r, c) == coded.at(r, c);
      if (d.truly_clean[r]) CHECK(equal);
    }
  }
  // both copies corrupted with probability 0.64
  CHECK(static_cast<double>(failed) / static_cast<double>(total) ==
        doctest::Approx(0.64).epsilon(0.01));
}

TEST_CASE("single-drone delivery fails at the erasure rate") {
  Rng rng(137);
  const FieldSpec f2(2);
  ChannelParams params;
  params.drones = 1;
  params.erasure = {0.35};
  params.payload_len = 16;
  const FqMatrix coded = FqMatrix::random(f2, 500, 16, rng);
  std::uint64_t failed = 0;
  const int rounds = 200;
  for (int i = 0; i < rounds; ++i) {
    const auto buffers = transmit(coded, params, rng);
    const Delivery d = deliver(buffers, f2, params.packing, rng);
    failed += d.crc_fail.size();
  }
  CHECK(static_cast<double>(failed) / (500.0 * rounds) ==
        doctest::Approx(0.35).epsilon(0.02));
}

TEST_CASE("false accepts stay within the checksum collision budget") {
  // Dense corruption: replace payloads with fresh uniform bytes, count how
  // often the stale checksum still verifies. Expected rate 2^-16.
  Rng rng(139);
  const std::uint32_t len = 32;
  std::vector<std::uint32_t> payload(len);
  for (auto& s : payload) s = static_cast<std::uint32_t>(rng.below(251));
  const std::uint16_t crc = payload_crc(payload, 251, SymbolPacking::ByteRaw);
  const int rounds = 200000;
  int collisions = 0;
  for (int i = 0; i < rounds; ++i) {
    std::vector<std::uint32_t> corrupted(len);
    for (auto& s : corrupted) s = static_cast<std::uint32_t>(rng.below(251));
    collisions += payload_crc(corrupted, 251, SymbolPacking::ByteRaw) == crc;
  }
  const double lambda = rounds / 65536.0;  // ~3.05
  CHECK(collisions <= lambda + 3.0 * std::sqrt(lambda) + 1.0);
}

TEST_CASE("determinism under a fixed seed") {
  const FieldSpec f2(2);
  ChannelParams params;
  params.drones = 2;
  params.erasure = {0.5, 0.5};
  params.payload_len = 24;
  Rng gen(149);
  const FqMatrix coded = FqMatrix::random(f2, 40, 24, gen);
  Rng a(777), b(777);
  const auto buf_a = transmit(coded, params, a);
  const auto buf_b = transmit(coded, params, b);
  REQUIRE(buf_a.size() == buf_b.size());
  for (std::size_t m = 0; m < buf_a.size(); ++m)
    for (std::size_t i = 0; i < buf_a[m].size(); ++i) {
      CHECK(buf_a[m][i].payload == buf_b[m][i].payload);
      CHECK(buf_a[m][i].crc == buf_b[m][i].crc);
    }
  const Delivery da = deliver(buf_a, f2, params.packing, a);
  const Delivery db = deliver(buf_b, f2, params.packing, b);
  CHECK(da.stored == db.stored);
  CHECK(da.crc_pass == db.crc_pass);
}

TEST_CASE("packet dump round trip") {
  Rng rng(151);
  std::vector<FramedPacket> packets;
  for (std::uint32_t i = 0; i < 7; ++i) {
    FramedPacket pkt;
    pkt.index = i * 3 + 1;
    pkt.payload.resize(20);
    for (auto& s : pkt.payload) s = static_cast<std::uint32_t>(rng.below(2));
    pkt.crc = payload_crc(pkt.payload, 2, SymbolPacking::PackedBits);
    packets.push_back(std::move(pkt));
  }
  std::ostringstream out(std::ios::binary);
  write_packet_dump(out, packets, 2, SymbolPacking::PackedBits);
  const std::string blob = out.str();
  // layout: 4 (index) + 2 (length) + 3 payload bytes + 2 (crc) per packet
  CHECK(blob.size() == packets.size() * (4 + 2 + 3 + 2));
  // big-endian index of the first packet
  CHECK(static_cast<unsigned char>(blob[0]) == 0);
  CHECK(static_cast<unsigned char>(blob[3]) == 1);
  std::istringstream in(blob, std::ios::binary);
  const auto back = read_packet_dump(in, 2, 20, SymbolPacking::PackedBits);
  REQUIRE(back.size() == packets.size());
  for (std::size_t i = 0; i < packets.size(); ++i) {
    CHECK(back[i].index == packets[i].index);
    CHECK(back[i].payload == packets[i].payload);
    CHECK(back[i].crc == packets[i].crc);
    CHECK(back[i].clean);
  }
  std::istringstream truncated(blob.substr(0, blob.size() - 1), std::ios::binary);
  CHECK_THROWS_AS(read_packet_dump(truncated, 2, 20, SymbolPacking::PackedBits),
                  std::runtime_error);
}

TEST_CASE("channel parameter validation") {
  ChannelParams p;
  p.drones = 0;
  CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
  p.drones = 2;
  p.erasure = {0.5};
  CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
  p.erasure = {0.5, 1.5};
  CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
  p.erasure = {0.5, 0.5};
  p.symbol_error_prob = 0.0;
  CHECK_THROWS_AS(p.validate(2), std::invalid_argument);
  p.symbol_error_prob = 0.05;
  p.packing = SymbolPacking::PackedBits;
  CHECK_THROWS_AS(p.validate(3), std::invalid_argument);
  CHECK_NOTHROW(p.validate(2));
}
