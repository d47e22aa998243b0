#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lcq/feature_matrix.hpp"

namespace lcq {

// Feature layout of an ingested record: index 0 is the mag1c enhancement
// average, indices 1..8 the band averages. Feature identifiers used by the
// leave-one-out grid follow the same numbering.
inline constexpr int kRawFeatureCount = 9;
inline constexpr int kSelectedFeatureCount = 8;
inline constexpr std::array<const char *, 9> kFeatureNames = {
    "mag1c", "b460", "b550", "b640", "b2004",
    "b2109", "b2310", "b2350", "b2360"};

inline constexpr double kAngleLo = 0.0;
inline constexpr double kAngleHi = 3.14159265358979323846;

struct SuperpixelRecord {
    std::string image_id;
    long superpixel_id = 0;
    std::vector<double> features;
    int label = 0; // 0 background, 1 methane
    long pixel_count = 0;

    std::string id() const {
        return image_id + ":" + std::to_string(superpixel_id);
    }
};

struct Dataset {
    std::vector<SuperpixelRecord> records;
    std::string split; // free-form tag: "train" / "test" / ...
    std::size_t feature_count = kRawFeatureCount;

    std::size_t size() const { return records.size(); }
    std::size_t count_label(int label) const;
    std::vector<int> labels() const;
    std::vector<std::string> ids() const;
    FeatureMatrix matrix() const;
};

// Delimited table format (UTF-8, LF, comma separator, header required):
// image_id,superpixel_id,mag1c,b460,b550,b640,b2004,b2109,b2310,b2350,b2360,label,pixel_count
Dataset load_table(const std::string &path);
void save_table(const std::string &path, const Dataset &ds);

// Per-feature min-max from the training pool, mapping onto [0, pi].
struct ScalingStats {
    std::vector<double> min;
    std::vector<double> max;
};

ScalingStats fit_scaling(const Dataset &train);
// Constant feature columns map to pi/2; out-of-range values clip to [0, pi].
Dataset apply_scaling(const ScalingStats &stats, const Dataset &ds);

// Seeded uniform draw without replacement: per_class records of each label.
Dataset sample_training(const Dataset &pool, int per_class, std::uint64_t seed);

// Every methane record plus an equal-sized seeded draw of background ones.
Dataset build_balanced_test(const Dataset &pool, std::uint64_t seed);

// Identifiers of the 8 features kept by a grid configuration:
// removed_band = 0: bands 1..8, no mag1c; removed_band in 1..8: mag1c plus
// the other seven bands in ascending order.
std::vector<int> selected_feature_ids(bool use_mag1c, int removed_band);

Dataset select_features(const Dataset &ds, bool use_mag1c, int removed_band);

struct SynthParams {
    int n_images = 4;
    int superpixels_per_image = 200;
    double methane_fraction = 0.3;
    double class_separation = 4.0; // class-mean gap in pooled stddev units
    std::uint64_t seed = 1;
};

// Two-class diagonal Gaussian mixture over the 9 features; the mag1c column
// carries the largest class-mean gap. Deterministic under the seed.
Dataset synth_generate(const SynthParams &params);

} // namespace lcq
