// pipeline.hpp — Configuration-driven analysis runs with CSV and manifest output

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eigencorr/config.hpp"
#include "eigencorr/correlations.hpp"
#include "eigencorr/csv.hpp"
#include "eigencorr/dynamics.hpp"
#include "eigencorr/models.hpp"
#include "eigencorr/spacings.hpp"
#include "eigencorr/spectral.hpp"

namespace eigencorr {

// Upper bound on the ordered pairs enumerated by the all-pairs null
// correlator; larger spaces are subsampled deterministically.
inline constexpr std::size_t kAllPairsSampleCap = 200000;

struct PipelineResult {
    std::filesystem::path output_dir;
    nlohmann::json manifest;
};

namespace detail {

class ArtifactSink {
public:
    explicit ArtifactSink(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    void store(const std::string& name, const std::string& text) {
        write_text_file(dir_ / name, text);
        nlohmann::json entry;
        entry["name"] = name;
        entry["bytes"] = text.size();
        entry["fnv1a64"] = hex_u64(fnv1a64(text));
        files_[name] = std::move(entry);
    }

    nlohmann::json file_list() const {
        auto list = nlohmann::json::array();
        for (const auto& [name, entry] : files_) list.push_back(entry);
        return list;
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::map<std::string, nlohmann::json> files_;
};

inline std::string binned_csv(std::initializer_list<std::string_view> columns, const BinnedStatistic& stat,
                              const BinnedStatistic* prediction = nullptr) {
    CsvBuilder csv(columns);
    for (std::size_t b = 0; b < stat.size(); ++b) {
        if (!stat.defined(b)) continue;
        csv.field(stat.centers[b]).field(stat.mean[b]).field(stat.count[b]);
        if (prediction) {
            if (prediction->defined(b)) csv.field(prediction->mean[b]);
            else csv.blank_field();
        }
        csv.end_row();
    }
    return csv.text();
}

inline nlohmann::json stats_to_json(const CouplingStats& st) {
    nlohmann::json node;
    node["n_bar"] = st.n_bar;
    node["n_plus"] = st.n_plus;
    node["n_minus"] = st.n_minus;
    const auto put = [&node](const char* key, const std::optional<double>& v) {
        if (v) node[key] = *v;
        else node[key] = nullptr;
    };
    put("v_bar", st.v_bar);
    put("v2_bar", st.v2_bar);
    put("vabs_bar", st.vabs_bar);
    put("v_plus", st.v_plus);
    put("v_minus", st.v_minus);
    put("w_bar", st.w_bar);
    return node;
}

inline std::string coupling_stats_csv(const CouplingStats& st) {
    CsvBuilder csv({"n_bar", "n_plus", "n_minus", "v_bar", "v2_bar", "vabs_bar", "v_plus", "v_minus",
                    "w_bar"});
    csv.field(st.n_bar).field(st.n_plus).field(st.n_minus);
    for (const auto& v : {st.v_bar, st.v2_bar, st.vabs_bar, st.v_plus, st.v_minus, st.w_bar}) {
        if (v) csv.field(*v);
        else csv.blank_field();
    }
    csv.end_row();
    return csv.text();
}

inline std::vector<std::vector<double>> split_by_labels(const SpectralData& s,
                                                        std::span<const int> labels, int n_sectors) {
    const auto sector_of = eigenstate_sectors(s, labels, n_sectors);
    std::vector<std::vector<double>> sectors(static_cast<std::size_t>(n_sectors));
    for (std::size_t alpha = 0; alpha < s.dim(); ++alpha)
        sectors[static_cast<std::size_t>(sector_of[alpha])].push_back(
            s.energies(static_cast<Eigen::Index>(alpha)));
    return sectors;
}

inline std::vector<std::vector<double>> spacing_sectors(const ModelSpec& spec, const BasisCatalog& basis,
                                                        const SpectralData& s) {
    if (const auto* dicke = std::get_if<DickeSpec>(&spec)) {
        const auto parity = dicke_basis_parity(basis, dicke->n_atoms);
        return split_by_labels(s, parity, 2);
    }
    if (const auto* ising = std::get_if<DefectIsingSpec>(&spec)) {
        // The transverse field skips the last site, so its z projection is
        // conserved and the spectrum superposes two independent sectors.
        std::vector<int> last_site(s.dim());
        for (std::size_t k = 0; k < s.dim(); ++k)
            last_site[k] = static_cast<int>(basis.labels[k][0] >> (ising->n_sites - 1) & 1);
        return split_by_labels(s, last_site, 2);
    }
    std::vector<double> all(s.energies.data(), s.energies.data() + s.energies.size());
    return {std::move(all)};
}

}  // namespace detail

inline PipelineResult run_pipeline(const RunConfig& cfg) {
    const Model model = build_model(cfg.model);
    HamiltonianPair ham = model.hamiltonian;
    if (cfg.sign_flip) ham.v = randomize_signs(ham.v, cfg.sign_flip->fraction, cfg.sign_flip->seed);

    std::cout << "eigencorr: model " << model_name(cfg.model) << ", dimension " << ham.dim() << '\n';
    const SpectralData spectral = diagonalize(ham);
    const EnergyWindow window = select_window(spectral, cfg.window_count);
    const CouplingGraph graph = build_graph(ham.v);
    const CouplingStats stats = compute_stats(ham.v, graph);

    const bool needs_grid = std::any_of(cfg.analyses.begin(), cfg.analyses.end(), [](Analysis a) {
        return a != Analysis::dynamics && a != Analysis::spacings;
    });
    BinGrid grid{-1.0, 1.0, cfg.grid.n_bins};
    if (needs_grid) {
        if (cfg.grid.automatic) grid = auto_grid(spectral, window, cfg.grid.n_bins);
        else grid = BinGrid{cfg.grid.eps_min, cfg.grid.eps_max, cfg.grid.n_bins};
    }

    detail::ArtifactSink sink(cfg.output_dir);
    {
        CsvBuilder csv({"alpha", "energy"});
        for (Eigen::Index alpha = 0; alpha < spectral.energies.size(); ++alpha) {
            csv.field(static_cast<long long>(alpha)).field(spectral.energies(alpha));
            csv.end_row();
        }
        sink.store("spectrum.csv", csv.text());
    }
    sink.store("coupling_stats.csv", detail::coupling_stats_csv(stats));

    std::optional<int> dynamics_initial;
    for (const auto analysis : cfg.analyses) {
        switch (analysis) {
            case Analysis::efshape: {
                sink.store("efshape.csv",
                           detail::binned_csv({"eps_center", "pi", "count"}, ef_shape(spectral, window, grid)));
                break;
            }
            case Analysis::corr1: {
                const auto c1 = corr1(spectral, window, graph, grid);
                std::optional<BinnedStatistic> pred;
                if (stats.v_bar && *stats.v_bar != 0.0) pred = predict_c1(stats, grid);
                sink.store("corr1.csv", detail::binned_csv({"eps_center", "value", "count", "prediction"}, c1,
                                                           pred ? &*pred : nullptr));
                break;
            }
            case Analysis::corr2: {
                const auto second = corr2(spectral, window, graph, grid);
                std::optional<BinnedStatistic> pred;
                if (stats.w_bar && *stats.w_bar != 0.0 && stats.n_bar > 1.0)
                    pred = predict_c2(stats, second.eta, grid);
                sink.store("corr2.csv", detail::binned_csv({"eps_center", "value", "count", "prediction"},
                                                           second.c2, pred ? &*pred : nullptr));
                CsvBuilder eta({"eps_center", "eta", "pi_d", "count"});
                for (std::size_t b = 0; b < second.eta.size(); ++b) {
                    if (!second.eta.defined(b)) continue;
                    eta.field(second.eta.centers[b])
                        .field(second.eta.mean[b])
                        .field(second.pi_d.mean[b])
                        .field(second.eta.count[b]);
                    eta.end_row();
                }
                sink.store("corr2_eta.csv", eta.text());
                break;
            }
            case Analysis::corr1_signed: {
                const auto resolved = corr1_signed(spectral, window, ham.v, graph, grid);
                std::optional<BinnedStatistic> pred;
                if (stats.vabs_bar && *stats.vabs_bar != 0.0) pred = predict_c1_weighted(stats, grid);
                CsvBuilder csv({"eps_center", "c1_plus", "count_plus", "c1_minus", "count_minus",
                                "c1_weighted", "prediction"});
                for (std::size_t b = 0; b < resolved.c1_weighted.size(); ++b) {
                    const bool any = resolved.c1_plus.defined(b) || resolved.c1_minus.defined(b) ||
                                     resolved.c1_weighted.defined(b);
                    if (!any) continue;
                    csv.field(resolved.c1_weighted.centers[b]);
                    if (resolved.c1_plus.defined(b))
                        csv.field(resolved.c1_plus.mean[b]).field(resolved.c1_plus.count[b]);
                    else
                        csv.blank_field().field(resolved.c1_plus.count[b]);
                    if (resolved.c1_minus.defined(b))
                        csv.field(resolved.c1_minus.mean[b]).field(resolved.c1_minus.count[b]);
                    else
                        csv.blank_field().field(resolved.c1_minus.count[b]);
                    if (resolved.c1_weighted.defined(b)) csv.field(resolved.c1_weighted.mean[b]);
                    else csv.blank_field();
                    if (pred && pred->defined(b)) csv.field(pred->mean[b]);
                    else csv.blank_field();
                    csv.end_row();
                }
                sink.store("corr1_signed.csv", csv.text());
                break;
            }
            case Analysis::corr_sign: {
                sink.store("corr_sign.csv", detail::binned_csv({"eps_center", "value", "count"},
                                                               corr_sign(spectral, window, ham.v, graph, grid)));
                break;
            }
            case Analysis::all_pairs: {
                sink.store("all_pairs.csv",
                           detail::binned_csv({"eps_center", "value", "count"},
                                              corr_all_pairs(spectral, window, grid, kAllPairsSampleCap)));
                break;
            }
            case Analysis::dynamics: {
                const int initial = cfg.dynamics.median_initial ? median_initial_state(spectral, window)
                                                                : cfg.dynamics.initial;
                if (initial >= static_cast<int>(spectral.dim()))
                    throw std::runtime_error("dynamics: initial index exceeds dimension");
                const TimeGrid tgrid =
                    make_time_grid(window.d, cfg.dynamics.t_max_over_tau, cfg.dynamics.steps);
                const DynamicsResult result = run_dynamics(spectral, initial, ham.v, graph, stats, tgrid);
                dynamics_initial = initial;
                CsvBuilder csv({"t_over_tau", "F_i", "F_i_pred", "survival_prob"});
                for (std::size_t k = 0; k < result.grid.points.size(); ++k) {
                    csv.field(result.grid.points[k] / result.grid.tau)
                        .field(result.f_i[k])
                        .field(result.predicted[k])
                        .field(std::norm(result.survival_amplitude[k]));
                    csv.end_row();
                }
                sink.store("dynamics.csv", csv.text());
                CsvBuilder global({"t_over_tau", "F_i_pred_global"});
                for (std::size_t k = 0; k < result.grid.points.size(); ++k) {
                    global.field(result.grid.points[k] / result.grid.tau);
                    if (std::isnan(result.predicted_global[k])) global.blank_field();
                    else global.field(result.predicted_global[k]);
                    global.end_row();
                }
                sink.store("dynamics_prediction_global.csv", global.text());
                break;
            }
            case Analysis::spacings: {
                const auto sectors = detail::spacing_sectors(cfg.model, model.basis, spectral);
                const SpacingReport report = sector_spacing_report(sectors);
                CsvBuilder hist({"s", "density", "wigner", "poisson"});
                for (std::size_t b = 0; b < report.histogram.s_centers.size(); ++b) {
                    hist.field(report.histogram.s_centers[b])
                        .field(report.histogram.density[b])
                        .field(report.histogram.wigner[b])
                        .field(report.histogram.poisson[b]);
                    hist.end_row();
                }
                sink.store("spacings.csv", hist.text());
                CsvBuilder summary({"mean_ratio", "goe_ref", "poisson_ref"});
                summary.field(report.ratio.mean_ratio).field(report.goe_ratio_ref).field(report.poisson_ratio_ref);
                summary.end_row();
                sink.store("spacings_summary.csv", summary.text());
                break;
            }
        }
    }

    nlohmann::json manifest;
    manifest["config"] = config_to_json(cfg);
    manifest["dim"] = spectral.dim();
    manifest["window"] = {{"first", window.first}, {"count", window.count}, {"d", window.d}};
    if (needs_grid)
        manifest["grid"] = {{"eps_min", grid.eps_min}, {"eps_max", grid.eps_max}, {"n_bins", grid.n_bins}};
    manifest["coupling_stats"] = detail::stats_to_json(stats);
    if (dynamics_initial) manifest["dynamics_initial_index"] = *dynamics_initial;
    manifest["files"] = sink.file_list();
    write_text_file(sink.dir() / "manifest.json", manifest.dump(2) + "\n");

    std::cout << "eigencorr: wrote " << (sink.file_list().size() + 1) << " files to " << sink.dir().string()
              << '\n';
    return PipelineResult{sink.dir(), std::move(manifest)};
}

}  // namespace eigencorr
