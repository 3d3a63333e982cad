#include <benchmark/benchmark.h>

#include "sweepfocus/blur_range.hpp"
#include "sweepfocus/image.hpp"
#include "sweepfocus/optics.hpp"
#include "sweepfocus/psf.hpp"
#include "sweepfocus/waveform_db.hpp"

using namespace sweepfocus;

static void BM_BlurCircleDiameter(benchmark::State& state) {
    OpticalStack s;
    s.etl_power = 0.002;
    double d = 500.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(blur_circle_diameter(s, d));
        d = d < 5000.0 ? d + 1.0 : 100.0;
    }
}
BENCHMARK(BM_BlurCircleDiameter);

static void BM_MinBlurPower(benchmark::State& state) {
    const EyeModel eye = EyeModel::standard();
    for (auto _ : state) benchmark::DoNotOptimize(min_blur_power(eye, 15.0, 500.0));
}
BENCHMARK(BM_MinBlurPower);

static void BM_SelectWave(benchmark::State& state) {
    static const WaveformDb db = build_db(VoltageGrid{}, EtlModel{}, kSweepFrequency);
    for (auto _ : state) benchmark::DoNotOptimize(&select_wave(db, 0.0, 0.0025));
}
BENCHMARK(BM_SelectWave);

static void BM_ConvolveDisc(benchmark::State& state) {
    Image img(512, 384);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) img.at(x, y) = ((x / 8 + y / 8) % 2) ? 1.0 : 0.0;
    }
    const DiscKernel k(static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(convolve(img, k));
}
BENCHMARK(BM_ConvolveDisc)->Arg(3)->Arg(11)->Arg(31)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
