#include "lcq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "lcq/rng.hpp"
#include "lcq/simd.hpp"
#include "lcq/svm.hpp"
#include "lcq/version.hpp"

namespace lcq {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct CellSpec {
    int trial = 0;
    int feature_removed = 0;
    std::string model;
};

std::string fmt(const char *spec, double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string join_doubles(const std::vector<double> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ';';
        out += fmt("%.9g", v[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int> &v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ';';
        out += std::to_string(v[i]);
    }
    return out;
}

std::string csv_escape(std::string s) {
    for (char &c : s)
        if (c == '\n' || c == '\r')
            c = ' ';
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::uint64_t fnv1a(const std::string &s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::vector<int> to_pm1(const std::vector<int> &labels01) {
    std::vector<int> out(labels01.size());
    for (std::size_t i = 0; i < labels01.size(); ++i)
        out[i] = labels01[i] == 1 ? 1 : -1;
    return out;
}

std::vector<int> to_01(const std::vector<int> &pm1) {
    std::vector<int> out(pm1.size());
    for (std::size_t i = 0; i < pm1.size(); ++i)
        out[i] = pm1[i] > 0 ? 1 : 0;
    return out;
}

GridCellResult run_cell(const ExperimentConfig &cfg, const ExperimentData &data,
                        const CellSpec &spec) {
    GridCellResult res;
    res.trial = spec.trial;
    res.model = spec.model;
    res.feature_removed = spec.feature_removed;
    res.mag1c = spec.feature_removed >= 1;
    res.cell_seed = derive_seed(cfg.seed, "cell:" + spec.model,
                                {static_cast<std::uint64_t>(spec.trial),
                                 static_cast<std::uint64_t>(spec.feature_removed)});

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const auto trial = static_cast<std::uint64_t>(spec.trial);
        // Sampling streams are derived per trial only, so every cell of a
        // trial classifies the same training records and the same balanced
        // test set; the feature view is what varies across the grid.
        const std::uint64_t sample_seed =
            derive_seed(cfg.seed, "train-sample", {trial});
        const std::uint64_t test_seed =
            derive_seed(cfg.seed, "test-balance", {trial});

        Dataset vtrain =
            select_features(data.train_pool, res.mag1c, spec.feature_removed);
        Dataset vtest =
            select_features(data.test_pool, res.mag1c, spec.feature_removed);
        res.feature_ids = selected_feature_ids(res.mag1c, spec.feature_removed);

        const ScalingStats stats = fit_scaling(vtrain);
        vtrain = apply_scaling(stats, vtrain);
        vtest = apply_scaling(stats, vtest);

        const Dataset train = sample_training(vtrain, cfg.per_class, sample_seed);
        const Dataset psi = build_balanced_test(vtest, test_seed);

        const FeatureMatrix x = train.matrix();
        const FeatureMatrix xt = psi.matrix();
        const std::vector<int> y_train = to_pm1(train.labels());

        GramMatrix k_train, k_test;
        if (spec.model == kModelLinear) {
            k_train = linear_gram(x, x);
            k_test = linear_gram(xt, x);
        } else if (spec.model == kModelRbf) {
            const double gamma =
                cfg.rbf_gamma > 0.0 ? cfg.rbf_gamma : rbf_gamma_auto(x);
            k_train = rbf_gram(x, x, gamma);
            k_test = rbf_gram(xt, x, gamma);
        } else if (spec.model == kModelQuantum) {
            const std::uint64_t theta_base =
                cfg.theta_seed != 0 ? cfg.theta_seed : cfg.seed;
            EmbeddingConfig ecfg = EmbeddingConfig::random(
                kSelectedFeatureCount, cfg.layers,
                derive_seed(theta_base, "theta", {trial}), cfg.gate_family);
            if (cfg.optimize_theta)
                ecfg = optimize_theta(ecfg, x, y_train, cfg.theta_steps,
                                      cfg.theta_step_size)
                           .config;

            const EmbeddingCache cache_train = embed_samples(ecfg, x);
            const auto stack = quantum_gram_stack(cache_train);
            const LambdaWeights lw = compute_lambdas(stack, y_train);
            k_train = combine_kernels({stack, lw.lambda});

            const EmbeddingCache cache_test = embed_samples(ecfg, xt);
            const auto stack_test = quantum_gram_stack(cache_test, cache_train);
            k_test = combine_kernels({stack_test, lw.lambda});

            const LightconeWeights w = lightcone_weights(ecfg.layout());
            res.lambda = lw.lambda;
            res.lambda_fallback = lw.uniform_fallback;
            res.importance = importance_scores(w, lw.lambda).p;
        } else {
            throw validation_error("unknown model: " + spec.model);
        }

        const SvmModel model = train_precomputed(k_train, y_train, cfg.svm_c);
        const Prediction pred = predict(model, k_test);
        res.metrics = evaluate(psi.labels(), to_01(pred.labels));
        res.ok = true;
    } catch (const std::exception &e) {
        res.ok = false;
        res.error = e.what();
    }
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return res;
}

std::vector<GridCellResult> run_cells(const ExperimentConfig &cfg,
                                      const ExperimentData &data,
                                      const std::vector<CellSpec> &specs) {
    std::vector<GridCellResult> results(specs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size())
                return;
            results[i] = run_cell(cfg, data, specs[i]);
        }
    };

    const int threads = std::max(1, cfg.threads);
    if (threads == 1 || specs.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int count = std::min<int>(threads, static_cast<int>(specs.size()));
        pool.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    return results;
}

std::vector<CellSpec> build_specs(const ExperimentConfig &cfg) {
    std::vector<CellSpec> specs;
    for (int trial = 0; trial < cfg.trials; ++trial)
        for (int f : cfg.feature_grid)
            for (const std::string &model : cfg.models)
                specs.push_back({trial, f, model});
    return specs;
}

double metric_sum(const MetricReport &m) {
    return m.cls.sen + m.cls.spe + m.cls.acc + m.cls.f1 + m.cls.mcc;
}

void mean_std(const std::vector<double> &v, double &mean, double &sd) {
    mean = 0.0;
    sd = 0.0;
    if (v.empty())
        return;
    for (double x : v)
        mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2)
        return;
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::ofstream open_out(const fs::path &p) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw load_error("cannot write " + p.string());
    return out;
}

ordered_json config_json(const ExperimentConfig &cfg) {
    ordered_json j;
    j["data_path"] = cfg.data_path;
    j["test_data_path"] = cfg.test_data_path;
    j["use_synth"] = cfg.use_synth;
    j["synth_train"] = {{"n_images", cfg.synth_train.n_images},
                        {"superpixels_per_image", cfg.synth_train.superpixels_per_image},
                        {"methane_fraction", cfg.synth_train.methane_fraction},
                        {"class_separation", cfg.synth_train.class_separation}};
    j["synth_test"] = {{"n_images", cfg.synth_test.n_images},
                       {"superpixels_per_image", cfg.synth_test.superpixels_per_image},
                       {"methane_fraction", cfg.synth_test.methane_fraction},
                       {"class_separation", cfg.synth_test.class_separation}};
    j["models"] = cfg.models;
    j["feature_grid"] = cfg.feature_grid;
    j["layers"] = cfg.layers;
    j["gate_family"] = cfg.gate_family;
    j["theta_seed"] = cfg.theta_seed;
    j["svm_c"] = cfg.svm_c;
    j["rbf_gamma"] = cfg.rbf_gamma;
    j["per_class"] = cfg.per_class;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["optimize_theta"] = cfg.optimize_theta;
    j["theta_steps"] = cfg.theta_steps;
    j["theta_step_size"] = cfg.theta_step_size;
    return j;
}

void write_manifest(const fs::path &path, const ExperimentConfig &cfg,
                    const std::vector<GridCellResult> &results) {
    ordered_json j;
    j["tool"] = "lcq";
    j["version"] = LCQ_VERSION_STRING;
    j["simd_backend"] = std::string(simd::name(simd::active()));
    j["config"] = config_json(cfg);
    double wall = 0.0;
    int failed = 0;
    ordered_json cells = ordered_json::array();
    for (const auto &r : results) {
        wall += r.wall_seconds;
        if (!r.ok)
            ++failed;
        cells.push_back({{"trial", r.trial},
                         {"model", r.model},
                         {"F", r.feature_removed},
                         {"ok", r.ok},
                         {"cell_seed", r.cell_seed},
                         {"wall_seconds", r.wall_seconds}});
    }
    j["cells"] = cells;
    j["failed_cells"] = failed;
    j["total_cell_seconds"] = wall;

    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace

void ExperimentConfig::validate() const {
    if (trials < 1)
        throw validation_error("trial count must be >= 1");
    if (per_class < 1)
        throw validation_error("per-class training count must be >= 1");
    if (layers < 1)
        throw validation_error("layer count must be >= 1");
    if (models.empty())
        throw validation_error("model list is empty");
    for (const auto &m : models)
        if (m != kModelLinear && m != kModelRbf && m != kModelQuantum)
            throw validation_error("unknown model: " + m);
    if (feature_grid.empty())
        throw validation_error("feature grid is empty");
    for (int f : feature_grid)
        if (f < 0 || f > 8)
            throw validation_error("feature identifiers must be in 0..8");
    if (!use_synth && data_path.empty())
        throw validation_error("either a data path or synthetic mode is required");
}

std::string model_display_name(const std::string &model) {
    if (model == kModelLinear)
        return "SVM_L";
    if (model == kModelRbf)
        return "SVM_RBF";
    if (model == kModelQuantum)
        return "SVM_Q";
    return model;
}

ExperimentData prepare_data(const ExperimentConfig &cfg) {
    cfg.validate();
    ExperimentData data;
    if (cfg.use_synth) {
        SynthParams train = cfg.synth_train;
        SynthParams test = cfg.synth_test;
        train.seed = derive_seed(cfg.seed, "synth-train");
        test.seed = derive_seed(cfg.seed, "synth-test");
        data.train_pool = synth_generate(train);
        data.test_pool = synth_generate(test);
    } else if (!cfg.test_data_path.empty()) {
        data.train_pool = load_table(cfg.data_path);
        data.test_pool = load_table(cfg.test_data_path);
    } else {
        // Single table: stable image-level split, independent of the seed so
        // the pools do not move when only the seed changes.
        const Dataset all = load_table(cfg.data_path);
        for (const auto &r : all.records)
            ((fnv1a(r.image_id) & 1u) == 0 ? data.train_pool : data.test_pool)
                .records.push_back(r);
    }
    data.train_pool.split = "train";
    data.test_pool.split = "test";
    return data;
}

std::vector<GridCellResult> run_grid(const ExperimentConfig &cfg) {
    const ExperimentData data = prepare_data(cfg);
    return run_cells(cfg, data, build_specs(cfg));
}

ImportanceTable run_importance_study(const ExperimentConfig &cfg) {
    ExperimentConfig qcfg = cfg;
    qcfg.models = {kModelQuantum};
    if (std::find(cfg.models.begin(), cfg.models.end(), kModelQuantum) ==
        cfg.models.end())
        throw validation_error("importance study needs the quantum model enabled");

    ImportanceTable table;
    table.cells = run_grid(qcfg);

    for (int feature = 0; feature < kRawFeatureCount; ++feature) {
        std::vector<double> ps, ss;
        for (const auto &cell : table.cells) {
            if (!cell.ok)
                continue;
            const auto it = std::find(cell.feature_ids.begin(),
                                      cell.feature_ids.end(), feature);
            if (it == cell.feature_ids.end())
                continue;
            const auto pos = static_cast<std::size_t>(
                std::distance(cell.feature_ids.begin(), it));
            ps.push_back(cell.importance[pos]);
            ss.push_back(metric_sum(cell.metrics));
        }
        if (ps.empty())
            continue;
        ImportanceRow row;
        row.feature = feature;
        row.cells = static_cast<int>(ps.size());
        mean_std(ps, row.mean_p, row.std_p);
        mean_std(ss, row.mean_s, row.std_s);
        table.rows.push_back(row);
    }

    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ImportanceRow &a, const ImportanceRow &b) {
                         if (a.mean_p != b.mean_p)
                             return a.mean_p > b.mean_p;
                         return a.feature < b.feature;
                     });
    return table;
}

void emit_report(const std::vector<GridCellResult> &results,
                 const ExperimentConfig &cfg, const std::string &out_dir) {
    if (results.empty())
        throw validation_error("no results to report");
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    {
        auto csv = open_out(dir / "results.csv");
        csv << "trial,model,mag1c,F,status,sen,spe,acc,f1,mcc,chi2,p_value,"
               "phi,degenerate,lambda,p_scores,feature_ids,cell_seed,error\n";
        for (const auto &r : results) {
            csv << r.trial << ',' << r.model << ','
                << (r.mag1c ? "yes" : "no") << ',' << r.feature_removed << ','
                << (r.ok ? "ok" : "failed") << ',';
            if (r.ok) {
                const auto &m = r.metrics;
                csv << fmt("%.6f", m.cls.sen) << ',' << fmt("%.6f", m.cls.spe)
                    << ',' << fmt("%.6f", m.cls.acc) << ','
                    << fmt("%.6f", m.cls.f1) << ',' << fmt("%.6f", m.cls.mcc)
                    << ',' << fmt("%.6g", m.chi.chi2) << ','
                    << fmt("%.6g", m.chi.p_value) << ','
                    << fmt("%.6g", m.chi.phi) << ','
                    << ((m.cls.degenerate || m.chi.degenerate) ? "yes" : "no");
            } else {
                csv << ",,,,,,,,";
            }
            csv << ',' << join_doubles(r.lambda) << ','
                << join_doubles(r.importance) << ',' << join_ints(r.feature_ids)
                << ',' << r.cell_seed << ',' << csv_escape(r.error) << '\n';
        }
    }

    {
        auto txt = open_out(dir / "results.txt");
        char line[256];
        std::snprintf(line, sizeof(line),
                      "%-5s %-8s %-6s %-3s %7s %7s %7s %7s %7s %9s %6s\n",
                      "trial", "model", "mag1c", "F", "SEN", "SPE", "ACC", "F1",
                      "MCC", "p-value", "Phi");
        txt << line;
        int last_f = results.empty() ? 0 : results.front().feature_removed;
        for (const auto &r : results) {
            if (r.feature_removed != last_f) {
                txt << '\n';
                last_f = r.feature_removed;
            }
            if (r.ok) {
                const auto &m = r.metrics;
                const std::string phi =
                    m.chi.degenerate ? "---" : fmt("%.2f", m.chi.phi);
                std::snprintf(line, sizeof(line),
                              "%-5d %-8s %-6s %-3d %7.3f %7.3f %7.3f %7.3f "
                              "%7.3f %9.3f %6s\n",
                              r.trial, model_display_name(r.model).c_str(),
                              r.mag1c ? "yes" : "no", r.feature_removed,
                              m.cls.sen, m.cls.spe, m.cls.acc, m.cls.f1,
                              m.cls.mcc, m.chi.p_value, phi.c_str());
                txt << line;
            } else {
                std::snprintf(line, sizeof(line), "%-5d %-8s %-6s %-3d FAILED: ",
                              r.trial, model_display_name(r.model).c_str(),
                              r.mag1c ? "yes" : "no", r.feature_removed);
                txt << line << r.error << '\n';
            }
        }
    }

    write_manifest(dir / "manifest.json", cfg, results);
}

void emit_importance_report(const ImportanceTable &table,
                            const ExperimentConfig &cfg,
                            const std::string &out_dir) {
    if (table.cells.empty())
        throw validation_error("no results to report");
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    {
        auto csv = open_out(dir / "importance.csv");
        csv << "feature,name,cells,mean_p,std_p,mean_s,std_s\n";
        for (const auto &row : table.rows) {
            csv << row.feature << ','
                << kFeatureNames[static_cast<std::size_t>(row.feature)] << ','
                << row.cells << ',' << fmt("%.9g", row.mean_p) << ','
                << fmt("%.9g", row.std_p) << ',' << fmt("%.9g", row.mean_s)
                << ',' << fmt("%.9g", row.std_s) << '\n';
        }
    }

    {
        auto txt = open_out(dir / "importance.txt");
        const auto row_line = [&](const char *label, auto getter) {
            char cell[40];
            std::snprintf(cell, sizeof(cell), "%-10s", label);
            txt << cell;
            for (const auto &row : table.rows) {
                std::snprintf(cell, sizeof(cell), " %12s",
                              getter(row).c_str());
                txt << cell;
            }
            txt << '\n';
        };
        row_line("j", [](const ImportanceRow &r) {
            return std::to_string(r.feature);
        });
        row_line("<P_j>", [](const ImportanceRow &r) {
            return fmt("%.3f", r.mean_p) + "(" + fmt("%.0f", r.std_p * 1000.0) + ")";
        });
        row_line("<S_j>", [](const ImportanceRow &r) {
            return fmt("%.2f", r.mean_s) + "(" + fmt("%.0f", r.std_s * 100.0) + ")";
        });
        row_line("cells", [](const ImportanceRow &r) {
            return std::to_string(r.cells);
        });
    }

    emit_report(table.cells, cfg, out_dir);
}

} // namespace lcq
