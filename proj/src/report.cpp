#include "targetsearch/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "targetsearch/metrics.hpp"

namespace targetsearch {

namespace fs = std::filesystem;

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    // Shortest representation that round-trips a double.
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

}  // namespace

void write_steps_csv(const fs::path& path, const std::vector<RunRecord>& records) {
    auto out = open_out(path);
    out << "step,seed,qx,qy,qz,n_hat,n_found,n_meas,n_gated,score_expl,score_refine\n";
    for (const RunRecord& r : records) {
        for (const StepRecord& s : r.steps) {
            out << s.step << ',' << r.seed << ',' << format_number(s.commanded.x()) << ','
                << format_number(s.commanded.y()) << ',' << format_number(s.commanded.z()) << ','
                << format_number(s.expected_targets) << ',' << s.found_total << ','
                << s.measurement_count << ',' << s.gated_count << ','
                << format_number(s.exploration_score) << ','
                << format_number(s.refinement_score) << '\n';
        }
    }
}

void write_found_csv(const fs::path& path, const std::vector<RunRecord>& records) {
    auto out = open_out(path);
    out << "seed,found_step,x,y,z,matched_truth_index,match_dist\n";
    for (const RunRecord& r : records) {
        for (std::size_t i = 0; i < r.found.size(); ++i) {
            const int truth_idx = i < r.matched_truth.size() ? r.matched_truth[i] : -1;
            const double dist = i < r.match_dist.size() ? r.match_dist[i] : -1.0;
            out << r.seed << ',' << r.found[i].step << ',' << format_number(r.found[i].position.x())
                << ',' << format_number(r.found[i].position.y()) << ','
                << format_number(r.found[i].position.z()) << ',' << truth_idx << ','
                << format_number(dist) << '\n';
        }
    }
}

// Wall-clock timings stay out of the CSV outputs: reruns must be
// byte-identical.
void write_summary_csv(const fs::path& path, const std::vector<RunRecord>& records) {
    auto out = open_out(path);
    out << "seed,steps,steps_to_all_found,rmse_found,n_found,n_true,"
           "min_obstacle_distance,bonus_below_half_fraction,bonus_monotone\n";
    for (const RunRecord& r : records) {
        out << r.seed << ',' << r.steps.size() << ',';
        if (r.steps_to_all_found) out << *r.steps_to_all_found;
        out << ',';
        if (r.rmse) out << format_number(*r.rmse);
        out << ',' << r.found.size() << ',' << r.truth.size() << ','
            << format_number(r.min_obstacle_distance) << ','
            << format_number(r.bonus_below_half_fraction) << ','
            << (r.bonus_monotone ? 1 : 0) << '\n';
    }
}

void write_targets_csv(const fs::path& path, const std::vector<RunRecord>& records) {
    auto out = open_out(path);
    out << "seed,index,x,y,z\n";
    for (const RunRecord& r : records) {
        for (std::size_t i = 0; i < r.truth.size(); ++i) {
            out << r.seed << ',' << i << ',' << format_number(r.truth[i].x()) << ','
                << format_number(r.truth[i].y()) << ',' << format_number(r.truth[i].z()) << '\n';
        }
    }
}

void write_run_outputs(const fs::path& dir, const ExperimentSpec& spec,
                       const std::vector<RunRecord>& records) {
    fs::create_directories(dir);
    write_steps_csv(dir / "steps.csv", records);
    write_found_csv(dir / "found.csv", records);
    write_summary_csv(dir / "summary.csv", records);
    write_targets_csv(dir / "targets.csv", records);

    nlohmann::json meta;
    meta["name"] = spec.name;
    meta["max_steps"] = spec.max_steps;
    meta["seeds"] = spec.seeds;
    meta["algorithm"] = spec.algorithm == Algorithm::kProposed
                            ? "proposed"
                            : (spec.algorithm == Algorithm::kLawnmower ? "lawnmower"
                                                                       : "refinement-only");
    auto out = open_out(dir / "meta.json");
    out << meta.dump(2) << '\n';
}

namespace {

struct LineChart {
    std::vector<double> mean;
    std::vector<double> lower;
    std::vector<double> upper;
};

void write_chart_svg(const fs::path& path, const std::string& title, const LineChart& chart) {
    const int width = 640, height = 400;
    const int margin = 56;
    const std::size_t n = chart.mean.size();
    double ymax = 1.0;
    for (std::size_t i = 0; i < n; ++i) ymax = std::max(ymax, chart.upper[i]);
    const double xmax = n > 1 ? static_cast<double>(n - 1) : 1.0;

    const auto px = [&](double step) {
        return margin + step / xmax * (width - 2 * margin);
    };
    const auto py = [&](double v) {
        return height - margin - v / ymax * (height - 2 * margin);
    };
    const auto polyline = [&](const std::vector<double>& ys) {
        std::string points;
        for (std::size_t i = 0; i < n; ++i) {
            points += format_number(px(static_cast<double>(i))) + "," +
                      format_number(py(ys[i])) + " ";
        }
        return points;
    };

    auto out = open_out(path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
        << "</text>\n";
    out << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
        << "' y2='" << height - margin << "' stroke='black'/>\n";
    out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
        << height - margin << "' stroke='black'/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = ymax * tick / 4.0;
        out << "<text x='" << margin - 6 << "' y='" << py(v) + 4
            << "' text-anchor='end' font-size='11'>" << format_number(v) << "</text>\n";
        const double s = xmax * tick / 4.0;
        out << "<text x='" << px(s) << "' y='" << height - margin + 16
            << "' text-anchor='middle' font-size='11'>" << format_number(std::round(s))
            << "</text>\n";
    }
    out << "<text x='" << width / 2 << "' y='" << height - 12
        << "' text-anchor='middle' font-size='12'>step</text>\n";
    out << "<text x='16' y='" << height / 2
        << "' text-anchor='middle' font-size='12' transform='rotate(-90 16 " << height / 2
        << ")'>targets found</text>\n";
    if (n > 0) {
        out << "<polyline fill='none' stroke='#c44' stroke-dasharray='4 3' points='"
            << polyline(chart.lower) << "'/>\n";
        out << "<polyline fill='none' stroke='#c44' stroke-dasharray='4 3' points='"
            << polyline(chart.upper) << "'/>\n";
        out << "<polyline fill='none' stroke='#246' stroke-width='2' points='"
            << polyline(chart.mean) << "'/>\n";
    }
    out << "</svg>\n";
}

}  // namespace

void write_report(const fs::path& run_dir) {
    std::ifstream in(run_dir / "steps.csv");
    if (!in) throw std::runtime_error("no steps.csv under " + run_dir.string());

    // Reload the per-seed detection curves from the per-step file.
    std::map<std::uint64_t, std::vector<double>> detections;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() < 7) continue;
        detections[std::stoull(cells[1])].push_back(std::stod(cells[6]));
    }
    if (detections.size() < 2) {
        throw std::runtime_error("report needs at least two seeds in " + run_dir.string());
    }

    std::size_t longest = 0;
    for (const auto& [seed, curve] : detections) longest = std::max(longest, curve.size());

    LineChart chart;
    std::ofstream agg = open_out(run_dir / "aggregate_detections.csv");
    agg << "step,mean_found,ci_half_width,n_seeds\n";
    std::vector<double> samples;
    for (std::size_t k = 0; k < longest; ++k) {
        samples.clear();
        for (const auto& [seed, curve] : detections) {
            samples.push_back(curve.empty() ? 0.0 : curve[std::min(k, curve.size() - 1)]);
        }
        const MeanCI ci = mean_confidence(samples);
        agg << k << ',' << format_number(ci.mean) << ',' << format_number(ci.half_width) << ','
            << samples.size() << '\n';
        chart.mean.push_back(ci.mean);
        chart.lower.push_back(std::max(0.0, ci.mean - ci.half_width));
        chart.upper.push_back(ci.mean + ci.half_width);
    }

    // Roll the per-seed summary up to means with confidence intervals.
    std::ifstream sum_in(run_dir / "summary.csv");
    std::ofstream agg_sum = open_out(run_dir / "aggregate_summary.csv");
    agg_sum << "metric,mean,ci_half_width,n\n";
    if (sum_in) {
        std::vector<double> steps_done, rmse;
        std::getline(sum_in, line);
        while (std::getline(sum_in, line)) {
            if (line.empty()) continue;
            const auto cells = split_csv_line(line);
            if (cells.size() < 6) continue;
            steps_done.push_back(cells[2].empty() ? std::stod(cells[1]) : std::stod(cells[2]));
            if (!cells[3].empty()) rmse.push_back(std::stod(cells[3]));
        }
        const auto emit = [&](const std::string& name, const std::vector<double>& v) {
            if (v.size() < 2) return;
            const MeanCI ci = mean_confidence(v);
            agg_sum << name << ',' << format_number(ci.mean) << ','
                    << format_number(ci.half_width) << ',' << v.size() << '\n';
        };
        emit("steps_to_all_found", steps_done);
        emit("rmse_found", rmse);
    }

    write_chart_svg(run_dir / "detections.svg", "targets found over time (mean, 95% CI)", chart);
}

}  // namespace targetsearch
