#include "crowdsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "crowdsim/errors.hpp"
#include "json.hpp"

namespace crowdsim {
namespace metrics {

double car(const std::vector<SimEvent>& events, int total_steps) {
  if (total_steps <= 0) throw ValidationError("car: total_steps must be positive");
  std::set<int> overlap_steps;
  for (const SimEvent& e : events) {
    if (e.kind == SimEventKind::human_human_overlap) overlap_steps.insert(e.step);
  }
  return 100.0 * (1.0 - static_cast<double>(overlap_steps.size()) / total_steps);
}

double gr(const std::vector<SimEvent>& events, int n_humans) {
  if (n_humans <= 0) throw ValidationError("gr: n_humans must be positive");
  std::set<int> reached;
  for (const SimEvent& e : events) {
    if (e.kind == SimEventKind::human_reached_destination) reached.insert(e.actors.at(0));
  }
  return 100.0 * static_cast<double>(reached.size()) / n_humans;
}

double mct(const std::vector<double>& step_dynamics_seconds, int n_humans, int steps) {
  if (steps <= 0) throw ValidationError("mct: steps must be positive");
  if (n_humans <= 0) throw ValidationError("mct: n_humans must be positive");
  double total = 0.0;
  for (double s : step_dynamics_seconds) total += s;
  return total / (static_cast<double>(steps) * n_humans);
}

double spl(bool success, double shortest, double traveled) {
  if (!(shortest > 0.0)) throw ValidationError("spl: shortest path length must be positive");
  if (traveled < 0.0) throw ValidationError("spl: traveled must be non-negative");
  if (!success) return 0.0;
  return shortest / std::max(traveled, shortest);
}

double cpd(long collisions, double traveled) {
  if (traveled < 0.0) throw ValidationError("cpd: traveled must be non-negative");
  if (traveled == 0.0) {
    if (collisions == 0) return 0.0;
    throw ValidationError("cpd: collisions recorded with zero distance traveled");
  }
  return static_cast<double>(collisions) / traveled;
}

double reward_step(double d_prev, double d_now, bool collided, bool succeeded,
                   const RewardParams& params) {
  return params.r_collision * (collided ? 1.0 : 0.0) + params.r_success * (succeeded ? 1.0 : 0.0) +
         params.r_shaping * (d_prev - d_now);
}

LinearFit least_squares(std::span<const std::pair<double, double>> points) {
  LinearFit fit;
  const std::size_t n = points.size();
  if (n < 2) return fit;
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx <= 0.0) return fit;  // all x identical: underdetermined
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.ok = true;
  return fit;
}

namespace {

using nlohmann::ordered_json;

ordered_json episode_json(const EpisodeRow& row) {
  ordered_json e;
  e["scene"] = row.scene;
  e["episode"] = row.episode;
  e["success"] = row.report.success;
  e["spl"] = row.report.spl;
  e["dtg"] = row.report.dtg;
  if (row.report.cpd.has_value()) {
    e["cpd"] = *row.report.cpd;
  } else {
    e["cpd"] = nullptr;  // degenerate: collisions without movement
  }
  e["path_length"] = row.report.path_length;
  e["collisions"] = row.report.collisions;
  e["reward_sum"] = row.report.reward_sum;
  return e;
}

}  // namespace

NavAggregate aggregate_episodes(const std::vector<EpisodeRow>& episodes) {
  NavAggregate agg;
  agg.episodes = static_cast<int>(episodes.size());
  if (episodes.empty()) return agg;
  double spl_sum = 0, dtg_sum = 0, cpd_sum = 0;
  int successes = 0, cpd_count = 0;
  for (const EpisodeRow& row : episodes) {
    if (row.report.success) ++successes;
    spl_sum += row.report.spl;
    dtg_sum += row.report.dtg;
    if (row.report.cpd) {
      cpd_sum += *row.report.cpd;
      ++cpd_count;
    } else {
      ++agg.cpd_degenerate;
    }
  }
  agg.sr = 100.0 * successes / static_cast<double>(episodes.size());
  agg.spl = spl_sum / static_cast<double>(episodes.size());
  agg.dtg = dtg_sum / static_cast<double>(episodes.size());
  agg.cpd = cpd_count > 0 ? cpd_sum / cpd_count : 0.0;
  return agg;
}

std::string report_json(const MetricsReport& report, bool include_timing) {
  ordered_json j;
  if (report.car) j["car"] = *report.car;
  if (report.gr) j["gr"] = *report.gr;
  if (include_timing && report.mct_seconds) j["mct_seconds"] = *report.mct_seconds;
  if (report.nav) {
    ordered_json agg;
    agg["sr"] = report.nav->sr;
    agg["spl"] = report.nav->spl;
    agg["dtg"] = report.nav->dtg;
    agg["cpd"] = report.nav->cpd;
    agg["episodes"] = report.nav->episodes;
    agg["cpd_degenerate"] = report.nav->cpd_degenerate;
    j["aggregate"] = agg;
  }
  if (!report.scenes.empty()) {
    ordered_json rows = ordered_json::array();
    for (const DynamicsRow& r : report.scenes) {
      ordered_json row;
      row["scene"] = r.scene;
      row["n_humans"] = r.n_humans;
      row["steps"] = r.steps;
      row["car"] = r.car;
      row["gr"] = r.gr;
      if (include_timing) row["mct_seconds"] = r.mct_seconds;
      rows.push_back(row);
    }
    j["scenes"] = rows;
  }
  ordered_json eps = ordered_json::array();
  for (const EpisodeRow& row : report.episodes) eps.push_back(episode_json(row));
  j["episodes"] = eps;
  return j.dump(2) + "\n";
}

std::string report_csv(const MetricsReport& report, bool include_timing) {
  std::string out;
  char buf[256];
  if (!report.scenes.empty()) {
    out += include_timing ? "scene,n_humans,steps,car,gr,mct_seconds\n"
                          : "scene,n_humans,steps,car,gr\n";
    for (const DynamicsRow& r : report.scenes) {
      if (include_timing) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.9g,%.9g,%.9g\n", r.scene.c_str(), r.n_humans,
                      r.steps, r.car, r.gr, r.mct_seconds);
      } else {
        std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.9g,%.9g\n", r.scene.c_str(), r.n_humans,
                      r.steps, r.car, r.gr);
      }
      out += buf;
    }
    if (report.car && report.gr) {
      if (include_timing && report.mct_seconds) {
        std::snprintf(buf, sizeof(buf), "aggregate,,,%.9g,%.9g,%.9g\n", *report.car, *report.gr,
                      *report.mct_seconds);
      } else {
        std::snprintf(buf, sizeof(buf), "aggregate,,,%.9g,%.9g\n", *report.car, *report.gr);
      }
      out += buf;
    }
  }
  if (!report.episodes.empty()) {
    out += "scene,episode,success,spl,dtg,cpd,path_length,collisions,reward_sum\n";
    for (const EpisodeRow& row : report.episodes) {
      const EpisodeReport& r = row.report;
      std::string cpd_text = r.cpd ? [&] {
        char b[32];
        std::snprintf(b, sizeof(b), "%.9g", *r.cpd);
        return std::string(b);
      }()
                                   : std::string{};
      std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.9g,%.9g,%s,%.9g,%ld,%.9g\n", row.scene.c_str(),
                    row.episode, r.success ? 1 : 0, r.spl, r.dtg, cpd_text.c_str(), r.path_length,
                    r.collisions, r.reward_sum);
      out += buf;
    }
    if (report.nav) {
      std::snprintf(buf, sizeof(buf), "aggregate,,sr=%.9g,spl=%.9g,dtg=%.9g,cpd=%.9g,,,\n",
                    report.nav->sr, report.nav->spl, report.nav->dtg, report.nav->cpd);
      out += buf;
    }
  }
  return out;
}

MetricsReport report_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what());
  }
  MetricsReport report;
  if (j.contains("car")) report.car = j["car"].get<double>();
  if (j.contains("gr")) report.gr = j["gr"].get<double>();
  if (j.contains("mct_seconds")) report.mct_seconds = j["mct_seconds"].get<double>();
  if (j.contains("scenes")) {
    for (const auto& row : j["scenes"]) {
      DynamicsRow r;
      r.scene = row.at("scene").get<std::string>();
      r.n_humans = row.at("n_humans").get<int>();
      r.steps = row.at("steps").get<int>();
      r.car = row.at("car").get<double>();
      r.gr = row.at("gr").get<double>();
      if (row.contains("mct_seconds")) r.mct_seconds = row["mct_seconds"].get<double>();
      report.scenes.push_back(r);
    }
  }
  if (j.contains("episodes")) {
    for (const auto& e : j["episodes"]) {
      EpisodeRow row;
      row.scene = e.at("scene").get<std::string>();
      row.episode = e.at("episode").get<int>();
      row.report.success = e.at("success").get<bool>();
      row.report.spl = e.at("spl").get<double>();
      row.report.dtg = e.at("dtg").get<double>();
      if (!e.at("cpd").is_null()) row.report.cpd = e["cpd"].get<double>();
      row.report.path_length = e.at("path_length").get<double>();
      row.report.collisions = e.at("collisions").get<long>();
      row.report.reward_sum = e.at("reward_sum").get<double>();
      report.episodes.push_back(row);
    }
  }
  if (j.contains("aggregate")) {
    const auto& agg = j["aggregate"];
    NavAggregate nav;
    nav.sr = agg.at("sr").get<double>();
    nav.spl = agg.at("spl").get<double>();
    nav.dtg = agg.at("dtg").get<double>();
    nav.cpd = agg.at("cpd").get<double>();
    nav.episodes = agg.at("episodes").get<int>();
    nav.cpd_degenerate = agg.at("cpd_degenerate").get<int>();
    report.nav = nav;
  }
  return report;
}

}  // namespace metrics
}  // namespace crowdsim
