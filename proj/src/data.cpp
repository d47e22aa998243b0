#include "lcq/data.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "lcq/rng.hpp"

namespace lcq {

namespace {

const char *kHeader = "image_id,superpixel_id,mag1c,b460,b550,b640,b2004,"
                      "b2109,b2310,b2350,b2360,label,pixel_count";

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

bool parse_double(const std::string &s, double &out) {
    const char *first = s.data();
    const char *last = s.data() + s.size();
    const auto r = std::from_chars(first, last, out);
    return r.ec == std::errc{} && r.ptr == last && std::isfinite(out);
}

bool parse_long(const std::string &s, long &out) {
    const char *first = s.data();
    const char *last = s.data() + s.size();
    const auto r = std::from_chars(first, last, out);
    return r.ec == std::errc{} && r.ptr == last;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::size_t Dataset::count_label(int label) const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(),
                      [label](const SuperpixelRecord &r) { return r.label == label; }));
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(records.size());
    for (const auto &r : records)
        out.push_back(r.label);
    return out;
}

std::vector<std::string> Dataset::ids() const {
    std::vector<std::string> out;
    out.reserve(records.size());
    for (const auto &r : records)
        out.push_back(r.id());
    return out;
}

FeatureMatrix Dataset::matrix() const {
    FeatureMatrix m(records.size(), feature_count);
    m.ids = ids();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &f = records[i].features;
        std::copy(f.begin(), f.end(), m.row(i));
    }
    return m;
}

Dataset load_table(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw load_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line))
        throw load_error(path + ": empty file, header expected");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kHeader)
        throw load_error(path + ": unexpected header; expected \"" +
                         kHeader + "\"");

    Dataset ds;
    std::set<std::pair<std::string, long>> seen;
    std::ostringstream problems;
    int bad = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;

        const auto fields = split_csv(line);
        const auto complain = [&](const std::string &why) {
            ++bad;
            if (bad <= 20)
                problems << "  line " << line_no << ": " << why << '\n';
        };
        if (fields.size() != 13) {
            complain("expected 13 columns, got " + std::to_string(fields.size()));
            continue;
        }

        SuperpixelRecord rec;
        rec.image_id = fields[0];
        bool ok = true;
        if (rec.image_id.empty()) {
            complain("empty image_id");
            ok = false;
        }
        if (ok && !parse_long(fields[1], rec.superpixel_id)) {
            complain("bad superpixel_id \"" + fields[1] + "\"");
            ok = false;
        }
        rec.features.resize(kRawFeatureCount);
        for (int f = 0; ok && f < kRawFeatureCount; ++f) {
            if (!parse_double(fields[static_cast<std::size_t>(2 + f)],
                              rec.features[static_cast<std::size_t>(f)])) {
                complain(std::string("non-numeric ") + kFeatureNames[static_cast<std::size_t>(f)] +
                         " \"" + fields[static_cast<std::size_t>(2 + f)] + "\"");
                ok = false;
            }
        }
        long label = -1;
        if (ok && (!parse_long(fields[11], label) || (label != 0 && label != 1))) {
            complain("label must be 0 or 1, got \"" + fields[11] + "\"");
            ok = false;
        }
        long pixels = 0;
        if (ok && (!parse_long(fields[12], pixels) || pixels <= 0)) {
            complain("pixel_count must be a positive integer, got \"" +
                     fields[12] + "\"");
            ok = false;
        }
        if (!ok)
            continue;

        rec.label = static_cast<int>(label);
        rec.pixel_count = pixels;
        if (!seen.insert({rec.image_id, rec.superpixel_id}).second) {
            complain("duplicate id " + rec.id());
            continue;
        }
        ds.records.push_back(std::move(rec));
    }

    if (bad > 0) {
        std::ostringstream msg;
        msg << path << ": " << bad << " malformed row(s)\n" << problems.str();
        if (bad > 20)
            msg << "  ... (" << (bad - 20) << " more)\n";
        throw load_error(msg.str());
    }
    return ds;
}

void save_table(const std::string &path, const Dataset &ds) {
    if (ds.feature_count != kRawFeatureCount)
        throw validation_error("only 9-feature tables can be saved");
    std::ofstream out(path, std::ios::binary); // LF line endings everywhere
    if (!out)
        throw load_error("cannot write " + path);
    out << kHeader << '\n';
    for (const auto &r : ds.records) {
        out << r.image_id << ',' << r.superpixel_id;
        for (double f : r.features)
            out << ',' << format_g17(f);
        out << ',' << r.label << ',' << r.pixel_count << '\n';
    }
    if (!out)
        throw load_error("write failed: " + path);
}

ScalingStats fit_scaling(const Dataset &train) {
    if (train.records.empty())
        throw validation_error("cannot fit scaling on an empty dataset");
    ScalingStats s;
    s.min.assign(train.feature_count, std::numeric_limits<double>::infinity());
    s.max.assign(train.feature_count, -std::numeric_limits<double>::infinity());
    for (const auto &r : train.records)
        for (std::size_t f = 0; f < train.feature_count; ++f) {
            s.min[f] = std::min(s.min[f], r.features[f]);
            s.max[f] = std::max(s.max[f], r.features[f]);
        }
    return s;
}

Dataset apply_scaling(const ScalingStats &stats, const Dataset &ds) {
    if (stats.min.size() != ds.feature_count)
        throw validation_error("scaling stats do not match the feature count");
    Dataset out = ds;
    for (auto &r : out.records)
        for (std::size_t f = 0; f < out.feature_count; ++f) {
            const double lo = stats.min[f];
            const double hi = stats.max[f];
            double v;
            if (hi > lo)
                v = (r.features[f] - lo) / (hi - lo) * kAngleHi;
            else
                v = 0.5 * kAngleHi; // constant training column
            r.features[f] = std::clamp(v, kAngleLo, kAngleHi);
        }
    return out;
}

Dataset sample_training(const Dataset &pool, int per_class,
                        std::uint64_t seed) {
    if (per_class < 1)
        throw validation_error("per_class must be >= 1");
    std::vector<std::size_t> idx_pos, idx_neg;
    for (std::size_t i = 0; i < pool.records.size(); ++i)
        (pool.records[i].label == 1 ? idx_pos : idx_neg).push_back(i);

    const auto need = static_cast<std::size_t>(per_class);
    if (idx_pos.size() < need || idx_neg.size() < need) {
        std::ostringstream msg;
        msg << "training pool too small: need " << per_class
            << " per class, have " << idx_pos.size() << " methane / "
            << idx_neg.size() << " background";
        throw validation_error(msg.str());
    }

    Rng rng(seed);
    rng.shuffle(idx_pos.data(), idx_pos.size());
    rng.shuffle(idx_neg.data(), idx_neg.size());

    std::vector<std::size_t> chosen(idx_pos.begin(), idx_pos.begin() + need);
    chosen.insert(chosen.end(), idx_neg.begin(), idx_neg.begin() + need);
    std::sort(chosen.begin(), chosen.end()); // keep pool order in the output

    Dataset out;
    out.split = "train";
    out.feature_count = pool.feature_count;
    out.records.reserve(chosen.size());
    for (std::size_t i : chosen)
        out.records.push_back(pool.records[i]);
    return out;
}

Dataset build_balanced_test(const Dataset &pool, std::uint64_t seed) {
    std::vector<std::size_t> idx_pos, idx_neg;
    for (std::size_t i = 0; i < pool.records.size(); ++i)
        (pool.records[i].label == 1 ? idx_pos : idx_neg).push_back(i);
    if (idx_pos.empty())
        throw validation_error("test pool has no methane records");
    if (idx_neg.size() < idx_pos.size())
        throw validation_error("test pool has fewer background than methane records");

    Rng rng(seed);
    rng.shuffle(idx_neg.data(), idx_neg.size());

    std::vector<std::size_t> chosen = idx_pos;
    chosen.insert(chosen.end(), idx_neg.begin(),
                  idx_neg.begin() + static_cast<std::ptrdiff_t>(idx_pos.size()));
    std::sort(chosen.begin(), chosen.end());

    Dataset out;
    out.split = "test";
    out.feature_count = pool.feature_count;
    out.records.reserve(chosen.size());
    for (std::size_t i : chosen)
        out.records.push_back(pool.records[i]);
    return out;
}

std::vector<int> selected_feature_ids(bool use_mag1c, int removed_band) {
    if (removed_band < 0 || removed_band > 8)
        throw validation_error("feature identifier must be in 0..8");
    if (removed_band == 0) {
        if (use_mag1c)
            throw validation_error(
                "identifier 0 is the no-mag1c baseline; mag1c must be off");
        return {1, 2, 3, 4, 5, 6, 7, 8};
    }
    if (!use_mag1c)
        throw validation_error(
            "removing a band requires the mag1c column in its place");
    std::vector<int> ids = {0};
    for (int b = 1; b <= 8; ++b)
        if (b != removed_band)
            ids.push_back(b);
    return ids;
}

Dataset select_features(const Dataset &ds, bool use_mag1c, int removed_band) {
    if (ds.feature_count != kRawFeatureCount)
        throw validation_error("feature selection expects 9-feature records");
    const std::vector<int> ids = selected_feature_ids(use_mag1c, removed_band);

    Dataset out;
    out.split = ds.split;
    out.feature_count = ids.size();
    out.records.reserve(ds.records.size());
    for (const auto &r : ds.records) {
        SuperpixelRecord v = r;
        v.features.clear();
        v.features.reserve(ids.size());
        for (int id : ids)
            v.features.push_back(r.features[static_cast<std::size_t>(id)]);
        out.records.push_back(std::move(v));
    }
    return out;
}

Dataset synth_generate(const SynthParams &params) {
    if (params.n_images < 1 || params.superpixels_per_image < 1)
        throw validation_error("synthetic sizes must be positive");
    if (!(params.methane_fraction > 0.0) || !(params.methane_fraction < 1.0))
        throw validation_error("methane_fraction must be in (0, 1)");
    if (params.class_separation < 0.0)
        throw validation_error("class_separation must be non-negative");

    // Background mean / stddev per feature; methane shifts by
    // gap * separation stddevs. The mag1c column gets the largest gap.
    constexpr double mean[9] = {150.0, 420.0, 510.0, 630.0, 2010.0,
                                2100.0, 2290.0, 2340.0, 2370.0};
    constexpr double sdev[9] = {80.0, 55.0, 60.0, 65.0, 90.0,
                                85.0, 70.0, 75.0, 72.0};
    constexpr double gap[9] = {1.0, 0.7, -0.7, 0.7, -0.7, 0.7, -0.7, 0.7, -0.7};

    Rng rng(params.seed);
    Dataset ds;
    ds.split = "synth";
    for (int img = 0; img < params.n_images; ++img) {
        char img_id[32];
        std::snprintf(img_id, sizeof(img_id), "synth_%04d", img);
        for (int sp = 0; sp < params.superpixels_per_image; ++sp) {
            SuperpixelRecord rec;
            rec.image_id = img_id;
            rec.superpixel_id = sp;
            rec.label = rng.uniform() < params.methane_fraction ? 1 : 0;
            rec.features.resize(kRawFeatureCount);
            for (int f = 0; f < kRawFeatureCount; ++f) {
                double mu = mean[f];
                if (rec.label == 1)
                    mu += gap[f] * params.class_separation * sdev[f];
                rec.features[static_cast<std::size_t>(f)] =
                    mu + sdev[f] * rng.gaussian();
            }
            rec.pixel_count = 40 + static_cast<long>(rng.below(360));
            ds.records.push_back(std::move(rec));
        }
    }
    return ds;
}

} // namespace lcq
