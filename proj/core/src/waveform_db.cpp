#include "sweepfocus/waveform_db.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sweepfocus/errors.hpp"
#include "sweepfocus/units.hpp"

namespace sweepfocus {

namespace {

constexpr std::array<char, 8> kMagic{'S', 'F', 'W', 'A', 'V', 'E', 'D', 'B'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::ostream& out, T value) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const U bits = std::bit_cast<U>(value);
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    }
    out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    std::array<char, sizeof(T)> bytes{};
    if (!in.read(bytes.data(), bytes.size())) {
        throw ValidationError("waveform db: unexpected end of file");
    }
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bits |= static_cast<U>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    }
    return std::bit_cast<T>(bits);
}

} // namespace

WaveformDb::WaveformDb(VoltageGrid grid, EtlModel model, double frequency,
                       std::vector<WaveformEntry> entries)
    : grid_(grid), model_(model), frequency_(frequency), entries_(std::move(entries)) {}

void WaveformDb::write(std::ostream& out) const {
    const std::size_t n = samples_per_period(model_, frequency_);
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kVersion);
    put_le<double>(out, grid_.start);
    put_le<double>(out, grid_.step);
    put_le<std::uint64_t>(out, grid_.count);
    put_le<double>(out, frequency_);
    put_le<std::uint64_t>(out, n);
    put_le<double>(out, entries_.empty() ? 1.0 / (frequency_ * static_cast<double>(n))
                                         : entries_.front().output.sample_period());
    put_le<double>(out, model_.gain);
    put_le<double>(out, model_.time_constant);
    put_le<double>(out, model_.harmonic2);
    put_le<double>(out, model_.sample_spacing);
    put_le<std::uint64_t>(out, entries_.size());
    for (const auto& e : entries_) {
        if (e.output.size() != n) {
            throw ValidationError("waveform db: entry sample count differs from the header");
        }
        put_le<double>(out, e.wave.v_min);
        put_le<double>(out, e.wave.v_max);
        for (double p : e.output.samples()) put_le<double>(out, p);
    }
    if (!out) throw ValidationError("waveform db: write failed");
}

WaveformDb WaveformDb::read(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw ValidationError("waveform db: bad magic");
    }
    if (get_le<std::uint32_t>(in) != kVersion) {
        throw ValidationError("waveform db: unsupported version");
    }
    VoltageGrid grid;
    grid.start = get_le<double>(in);
    grid.step = get_le<double>(in);
    grid.count = get_le<std::uint64_t>(in);
    const double frequency = get_le<double>(in);
    const auto n = get_le<std::uint64_t>(in);
    const double sample_period = get_le<double>(in);
    EtlModel model;
    model.gain = get_le<double>(in);
    model.time_constant = get_le<double>(in);
    model.harmonic2 = get_le<double>(in);
    model.sample_spacing = get_le<double>(in);
    const auto count = get_le<std::uint64_t>(in);
    if (n == 0 || n > (1u << 24) || count > (1u << 24)) {
        throw ValidationError("waveform db: implausible header sizes");
    }

    std::vector<WaveformEntry> entries;
    entries.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        InputWave wave;
        wave.v_min = get_le<double>(in);
        wave.v_max = get_le<double>(in);
        wave.frequency = frequency;
        std::vector<double> samples(n);
        for (auto& p : samples) p = get_le<double>(in);
        entries.push_back({wave, OutputWaveform(std::move(samples), sample_period)});
    }
    return WaveformDb(grid, model, frequency, std::move(entries));
}

void WaveformDb::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
    write(out);
}

WaveformDb WaveformDb::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open waveform db " + path.string());
    return read(in);
}

WaveformDb build_db(const VoltageGrid& grid, const EtlModel& model, double frequency) {
    std::vector<WaveformEntry> entries;
    entries.reserve(grid.count * (grid.count + 1) / 2);
    for (std::size_t i = 0; i < grid.count; ++i) {
        for (std::size_t j = i; j < grid.count; ++j) {
            InputWave wave{grid.value(i), grid.value(j), frequency};
            entries.push_back({wave, synth_etl_response(wave, model)});
        }
    }
    return WaveformDb(grid, model, frequency, std::move(entries));
}

const WaveformEntry& select_wave(const WaveformDb& db, double p_low, double p_high) {
    if (!(p_low <= p_high)) {
        throw DomainError("select_wave: target range must satisfy p_low <= p_high");
    }
    const WaveformEntry* best = nullptr;
    const auto better = [](const WaveformEntry& a, const WaveformEntry& b) {
        if (a.output.range() != b.output.range()) return a.output.range() < b.output.range();
        const double span_a = std::abs(a.wave.v_max - a.wave.v_min);
        const double span_b = std::abs(b.wave.v_max - b.wave.v_min);
        if (span_a != span_b) return span_a < span_b;
        if (a.wave.v_min != b.wave.v_min) return a.wave.v_min < b.wave.v_min;
        return a.wave.v_max < b.wave.v_max;
    };
    for (const auto& e : db.entries()) {
        if (e.output.min_power() <= p_low && e.output.max_power() >= p_high) {
            if (best == nullptr || better(e, *best)) best = &e;
        }
    }
    if (best == nullptr) {
        std::ostringstream msg;
        msg << "no drive wave in the database covers [" << inv_mm_to_diopters(p_low) << ", "
            << inv_mm_to_diopters(p_high) << "] D";
        throw RangeUnachievable(msg.str());
    }
    return *best;
}

} // namespace sweepfocus
