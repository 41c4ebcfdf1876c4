// SPDX-License-Identifier: Apache-2.0
//
// beamdb - data-driven robust beamforming from a historical CSI database
// Copyright (C) 2026 beamdb contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "beamdb/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "beamdb/errors.hpp"

namespace beamdb
{

namespace
{

// schema helpers with readable error messages

template <typename T>
T require(const Json &doc, const std::string &key)
{
    if (!doc.contains(key))
        throw ValidationError("config: missing key \"" + key + "\"");
    try
    {
        return doc.at(key).get<T>();
    }
    catch (const Json::exception &e)
    {
        throw ValidationError("config: key \"" + key + "\": " + e.what());
    }
}

template <typename T>
T get_or(const Json &doc, const std::string &key, T fallback)
{
    if (!doc.contains(key) || doc.at(key).is_null())
        return fallback;
    try
    {
        return doc.at(key).get<T>();
    }
    catch (const Json::exception &e)
    {
        throw ValidationError("config: key \"" + key + "\": " + e.what());
    }
}

Vec3 vec3_from_json(const Json &arr, const std::string &key)
{
    if (!arr.is_array() || arr.size() != 3)
        throw ValidationError("config: \"" + key + "\" must be a [x, y, z] array");
    return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>()};
}

Json vec3_to_json(Vec3 v) { return Json::array({v.x, v.y, v.z}); }

std::string wall_name(Wall w)
{
    switch (w)
    {
    case Wall::XMin: return "x_min";
    case Wall::XMax: return "x_max";
    case Wall::YMin: return "y_min";
    case Wall::YMax: return "y_max";
    case Wall::ZMin: return "z_min";
    case Wall::ZMax: return "z_max";
    }
    return "?";
}

Wall wall_from_name(const std::string &name)
{
    if (name == "x_min") return Wall::XMin;
    if (name == "x_max") return Wall::XMax;
    if (name == "y_min") return Wall::YMin;
    if (name == "y_max") return Wall::YMax;
    if (name == "z_min") return Wall::ZMin;
    if (name == "z_max") return Wall::ZMax;
    throw ValidationError("config: unknown wall \"" + name + "\"");
}

std::string init_name(InitStrategy s)
{
    switch (s)
    {
    case InitStrategy::Mrt: return "mrt";
    case InitStrategy::Ebf: return "ebf";
    case InitStrategy::BestBaseline: return "best_baseline";
    case InitStrategy::Random: return "random";
    case InitStrategy::Given: return "given";
    }
    return "?";
}

InitStrategy init_from_name(const std::string &name)
{
    if (name == "mrt") return InitStrategy::Mrt;
    if (name == "ebf") return InitStrategy::Ebf;
    if (name == "best_baseline") return InitStrategy::BestBaseline;
    if (name == "random") return InitStrategy::Random;
    if (name == "given") return InitStrategy::Given;
    throw ValidationError("config: unknown init strategy \"" + name + "\"");
}

} // namespace

Json environment_spec_to_json(const EnvironmentSpec &spec)
{
    Json array = {
        {"wall", wall_name(spec.array.wall)},
        {"center", vec3_to_json(spec.array.center)},
        {"carrier_hz", spec.array.carrier_hz},
        {"spacing_over_lambda", spec.array.spacing_over_lambda},
    };
    if (spec.array.elements_u && spec.array.elements_v)
        array["elements"] = Json::array({*spec.array.elements_u, *spec.array.elements_v});
    if (spec.array.width_m)
        array["width_m"] = *spec.array.width_m;
    if (spec.array.height_m)
        array["height_m"] = *spec.array.height_m;

    return Json{
        {"room",
         {{"width_x", spec.room.width_x},
          {"depth_y", spec.room.depth_y},
          {"height_z", spec.room.height_z}}},
        {"array", array},
        {"reflection_gain_db", spec.reflection_gain_db},
        {"scatterers",
         {{"center", vec3_to_json(spec.scatterers.ellipsoid.center)},
          {"semi_axes", vec3_to_json(spec.scatterers.ellipsoid.semi_axes)},
          {"density_per_m3", spec.scatterers.density_per_m3},
          {"rcs_mean_cm2", spec.scatterers.rcs_mean_cm2},
          {"rcs_var_cm4", spec.scatterers.rcs_var_cm4}}},
    };
}

EnvironmentSpec environment_spec_from_json(const Json &doc)
{
    EnvironmentSpec spec;
    if (doc.contains("room"))
    {
        const Json &room = doc.at("room");
        spec.room.width_x = get_or(room, "width_x", spec.room.width_x);
        spec.room.depth_y = get_or(room, "depth_y", spec.room.depth_y);
        spec.room.height_z = get_or(room, "height_z", spec.room.height_z);
    }
    if (doc.contains("array"))
    {
        const Json &arr = doc.at("array");
        if (arr.contains("wall"))
            spec.array.wall = wall_from_name(arr.at("wall").get<std::string>());
        if (arr.contains("center"))
            spec.array.center = vec3_from_json(arr.at("center"), "array.center");
        if (arr.contains("elements"))
        {
            const Json &el = arr.at("elements");
            if (!el.is_array() || el.size() != 2)
                throw ValidationError("config: array.elements must be [n_u, n_v]");
            spec.array.elements_u = el[0].get<std::size_t>();
            spec.array.elements_v = el[1].get<std::size_t>();
        }
        if (arr.contains("width_m"))
            spec.array.width_m = arr.at("width_m").get<double>();
        if (arr.contains("height_m"))
            spec.array.height_m = arr.at("height_m").get<double>();
        spec.array.carrier_hz = get_or(arr, "carrier_hz", spec.array.carrier_hz);
        spec.array.spacing_over_lambda =
            get_or(arr, "spacing_over_lambda", spec.array.spacing_over_lambda);
    }
    spec.reflection_gain_db = get_or(doc, "reflection_gain_db", spec.reflection_gain_db);
    if (doc.contains("scatterers"))
    {
        const Json &sc = doc.at("scatterers");
        if (sc.contains("center"))
            spec.scatterers.ellipsoid.center = vec3_from_json(sc.at("center"), "scatterers.center");
        if (sc.contains("semi_axes"))
            spec.scatterers.ellipsoid.semi_axes =
                vec3_from_json(sc.at("semi_axes"), "scatterers.semi_axes");
        spec.scatterers.density_per_m3 =
            get_or(sc, "density_per_m3", spec.scatterers.density_per_m3);
        spec.scatterers.rcs_mean_cm2 = get_or(sc, "rcs_mean_cm2", spec.scatterers.rcs_mean_cm2);
        spec.scatterers.rcs_var_cm4 = get_or(sc, "rcs_var_cm4", spec.scatterers.rcs_var_cm4);
    }
    return spec;
}

Json trajectory_spec_to_json(const TrajectorySpec &spec)
{
    Json doc{
        {"kind", spec.kind == TrajectoryKind::Circular ? "circular" : "zigzag"},
        {"count", spec.count},
        {"noise_std", spec.noise_std},
        {"z", spec.z},
    };
    if (spec.kind == TrajectoryKind::Circular)
    {
        doc["center"] = Json::array({spec.center_x, spec.center_y});
        doc["radius"] = spec.radius;
    }
    else
    {
        doc["x_range"] = Json::array({spec.x_lo, spec.x_hi});
        doc["y_range"] = Json::array({spec.y_lo, spec.y_hi});
        doc["pitch"] = spec.pitch;
    }
    return doc;
}

TrajectorySpec trajectory_spec_from_json(const Json &doc)
{
    TrajectorySpec spec;
    const std::string kind = get_or<std::string>(doc, "kind", "circular");
    if (kind == "circular")
        spec.kind = TrajectoryKind::Circular;
    else if (kind == "zigzag")
        spec.kind = TrajectoryKind::Zigzag;
    else
        throw ValidationError("config: trajectory kind must be \"circular\" or \"zigzag\"");

    if (doc.contains("center"))
    {
        const Json &c = doc.at("center");
        if (!c.is_array() || c.size() != 2)
            throw ValidationError("config: trajectory center must be [x, y]");
        spec.center_x = c[0].get<double>();
        spec.center_y = c[1].get<double>();
    }
    spec.radius = get_or(doc, "radius", spec.radius);
    if (doc.contains("x_range"))
    {
        const Json &r = doc.at("x_range");
        if (!r.is_array() || r.size() != 2)
            throw ValidationError("config: trajectory x_range must be [lo, hi]");
        spec.x_lo = r[0].get<double>();
        spec.x_hi = r[1].get<double>();
    }
    if (doc.contains("y_range"))
    {
        const Json &r = doc.at("y_range");
        if (!r.is_array() || r.size() != 2)
            throw ValidationError("config: trajectory y_range must be [lo, hi]");
        spec.y_lo = r[0].get<double>();
        spec.y_hi = r[1].get<double>();
    }
    spec.pitch = get_or(doc, "pitch", spec.pitch);
    spec.count = get_or(doc, "count", spec.count);
    spec.noise_std = get_or(doc, "noise_std", spec.noise_std);
    spec.z = get_or(doc, "z", spec.z);
    return spec;
}

Json neighborhood_params_to_json(const NeighborhoodParams &params)
{
    return Json{
        {"mode", params.mode == MatchMode::Threshold ? "threshold" : "top_t"},
        {"gamma", params.gamma},
        {"top_t", params.top_t},
        {"k", params.k},
        {"exclude_query", params.exclude_query},
    };
}

NeighborhoodParams neighborhood_params_from_json(const Json &doc)
{
    NeighborhoodParams params;
    const std::string mode = get_or<std::string>(doc, "mode", "top_t");
    if (mode == "threshold")
        params.mode = MatchMode::Threshold;
    else if (mode == "top_t")
        params.mode = MatchMode::TopT;
    else
        throw ValidationError("config: neighborhood mode must be \"threshold\" or \"top_t\"");

    params.gamma = get_or(doc, "gamma", params.gamma);
    params.top_t = get_or(doc, "top_t", params.top_t);
    params.k = get_or(doc, "k", params.k);
    params.exclude_query = get_or(doc, "exclude_query", params.exclude_query);

    // Optional angle form of the threshold. Eq.-style squared cosine by
    // default; plain cosine selectable since quoted thresholds sometimes
    // correspond to the unsquared metric.
    if (doc.contains("max_angle_deg"))
    {
        const double deg = doc.at("max_angle_deg").get<double>();
        if (deg <= 0.0 || deg >= 90.0)
            throw ValidationError("config: max_angle_deg must lie in (0, 90)");
        const double c = std::cos(deg * std::numbers::pi / 180.0);
        const std::string map = get_or<std::string>(doc, "angle_map", "cos2");
        if (map == "cos2")
            params.gamma = c * c;
        else if (map == "cos")
            params.gamma = c;
        else
            throw ValidationError("config: angle_map must be \"cos2\" or \"cos\"");
    }
    params.validate();
    return params;
}

namespace
{

Json solver_config_to_json(const SolverConfig &solver)
{
    return Json{
        {"max_outer", solver.max_outer},
        {"eps_outer", solver.eps_outer},
        {"eps_inner", solver.eps_inner},
        {"init", init_name(solver.init)},
        {"restarts", solver.restarts},
        {"seed", solver.seed},
    };
}

SolverConfig solver_config_from_json(const Json &doc)
{
    SolverConfig solver;
    solver.max_outer = get_or(doc, "max_outer", solver.max_outer);
    solver.eps_outer = get_or(doc, "eps_outer", solver.eps_outer);
    solver.eps_inner = get_or(doc, "eps_inner", solver.eps_inner);
    if (doc.contains("init"))
        solver.init = init_from_name(doc.at("init").get<std::string>());
    solver.restarts = get_or(doc, "restarts", solver.restarts);
    solver.seed = get_or(doc, "seed", solver.seed);
    return solver;
}

std::string sweep_axis_name(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::Neighbors: return "neighbors";
    case SweepAxis::Threshold: return "threshold";
    case SweepAxis::CodebookSize: return "codebook_size";
    }
    return "?";
}

SweepAxis sweep_axis_from_name(const std::string &name)
{
    if (name == "neighbors") return SweepAxis::Neighbors;
    if (name == "threshold") return SweepAxis::Threshold;
    if (name == "codebook_size") return SweepAxis::CodebookSize;
    throw ValidationError("config: unknown sweep axis \"" + name + "\"");
}

} // namespace

Json experiment_config_to_json(const ExperimentConfig &config)
{
    return Json{
        {"seed", config.seed},
        {"environment", environment_spec_to_json(config.env)},
        {"trajectory", trajectory_spec_to_json(config.trajectory)},
        {"sample_interval_s",
         config.sample_interval ? Json(*config.sample_interval) : Json(nullptr)},
        {"neighborhood", neighborhood_params_to_json(config.neighborhood)},
        {"solver", solver_config_to_json(config.solver)},
        {"codebook", {{"size", config.codebook_size}, {"power_dbw", config.power_dbw}}},
        {"sweep", {{"axis", sweep_axis_name(config.sweep.axis)}, {"values", config.sweep.values}}},
        {"trials", config.trials},
        // threads is a runtime knob with no effect on results; not part of
        // the experiment identity
    };
}

ExperimentConfig experiment_config_from_json(const Json &input)
{
    const Json &doc = input.contains("config") ? input.at("config") : input;
    ExperimentConfig config;
    config.seed = get_or(doc, "seed", config.seed);
    if (doc.contains("environment"))
        config.env = environment_spec_from_json(doc.at("environment"));
    if (doc.contains("trajectory"))
        config.trajectory = trajectory_spec_from_json(doc.at("trajectory"));
    if (doc.contains("sample_interval_s") && !doc.at("sample_interval_s").is_null())
        config.sample_interval = doc.at("sample_interval_s").get<double>();
    if (doc.contains("neighborhood"))
        config.neighborhood = neighborhood_params_from_json(doc.at("neighborhood"));
    if (doc.contains("solver"))
        config.solver = solver_config_from_json(doc.at("solver"));
    if (doc.contains("codebook"))
    {
        const Json &cb = doc.at("codebook");
        config.codebook_size = get_or(cb, "size", config.codebook_size);
        config.power_dbw = get_or(cb, "power_dbw", config.power_dbw);
    }
    if (doc.contains("sweep"))
    {
        const Json &sw = doc.at("sweep");
        if (sw.contains("axis"))
            config.sweep.axis = sweep_axis_from_name(sw.at("axis").get<std::string>());
        if (sw.contains("values"))
            config.sweep.values = sw.at("values").get<std::vector<double>>();
        // a threshold sweep may be written as a list of maximum angles
        if (sw.contains("angle_values_deg"))
        {
            if (config.sweep.axis != SweepAxis::Threshold)
                throw ValidationError("config: angle_values_deg requires the threshold axis");
            const auto degs = sw.at("angle_values_deg").get<std::vector<double>>();
            const std::string map = get_or<std::string>(sw, "angle_map", "cos2");
            if (map != "cos2" && map != "cos")
                throw ValidationError("config: angle_map must be \"cos2\" or \"cos\"");
            config.sweep.values.clear();
            for (double deg : degs)
            {
                if (deg <= 0.0 || deg >= 90.0)
                    throw ValidationError("config: sweep angles must lie in (0, 90)");
                const double c = std::cos(deg * std::numbers::pi / 180.0);
                config.sweep.values.push_back(map == "cos2" ? c * c : c);
            }
            std::sort(config.sweep.values.begin(), config.sweep.values.end());
        }
    }
    config.trials = get_or(doc, "trials", config.trials);
    config.threads = get_or(doc, "threads", config.threads);
    config.validate();
    return config;
}

Json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    try
    {
        Json doc;
        in >> doc;
        return doc;
    }
    catch (const Json::exception &e)
    {
        throw ValidationError(path + ": invalid JSON: " + e.what());
    }
}

void write_json_file(const std::string &path, const Json &doc)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    out << doc.dump(2) << "\n";
    if (!out)
        throw IoError("write failed for " + path);
}

ExperimentConfig load_experiment_config(const std::string &path)
{
    return experiment_config_from_json(read_json_file(path));
}

std::string database_metadata_path(const std::string &db_path)
{
    return db_path + ".meta.json";
}

void write_csi_database(const std::string &path, const CsiDatabase &db, const Json &metadata)
{
    db.validate();
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path);
    for (const CsiRecord &rec : db.records)
    {
        Json line;
        line["idx"] = rec.index;
        line["t"] = rec.timestamp ? Json(*rec.timestamp) : Json(nullptr);
        line["pos"] = rec.position ? vec3_to_json(*rec.position) : Json(nullptr);
        Json re = Json::array(), im = Json::array();
        for (std::size_t j = 0; j < rec.h.dim(); ++j)
        {
            re.push_back(rec.h[j].real());
            im.push_back(rec.h[j].imag());
        }
        line["re"] = std::move(re);
        line["im"] = std::move(im);
        out << line.dump() << "\n";
    }
    if (!out)
        throw IoError("write failed for " + path);
    write_json_file(database_metadata_path(path), metadata);
}

CsiDatabase read_csi_database(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);
    CsiDatabase db;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        Json doc;
        try
        {
            doc = Json::parse(line);
            CsiRecord rec;
            rec.index = doc.at("idx").get<std::int64_t>();
            if (doc.contains("t") && !doc.at("t").is_null())
                rec.timestamp = doc.at("t").get<double>();
            if (doc.contains("pos") && !doc.at("pos").is_null())
                rec.position = vec3_from_json(doc.at("pos"), "pos");
            const auto re = doc.at("re").get<std::vector<double>>();
            const auto im = doc.at("im").get<std::vector<double>>();
            if (re.size() != im.size() || re.empty())
                throw ValidationError("re/im length mismatch");
            std::vector<Complex> entries(re.size());
            for (std::size_t j = 0; j < re.size(); ++j)
                entries[j] = Complex(re[j], im[j]);
            rec.h = CVector(std::move(entries));
            db.records.push_back(std::move(rec));
        }
        catch (const Json::exception &e)
        {
            throw IoError(path + ":" + std::to_string(lineno) + ": bad record: " + e.what());
        }
        catch (const ValidationError &e)
        {
            throw IoError(path + ":" + std::to_string(lineno) + ": bad record: " + e.what());
        }
    }
    if (db.empty())
        throw IoError(path + ": database is empty");
    db.validate();
    return db;
}

Json database_metadata(const ExperimentConfig &config, const CsiDatabase &db)
{
    return Json{
        {"format", "beamdb-database"},
        {"version", 1},
        {"config", experiment_config_to_json(config)},
        {"antennas", db.dim()},
        {"records", db.size()},
    };
}

Json cvector_to_json(const CVector &v)
{
    Json re = Json::array(), im = Json::array();
    for (std::size_t j = 0; j < v.dim(); ++j)
    {
        re.push_back(v[j].real());
        im.push_back(v[j].imag());
    }
    return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

CVector cvector_from_json(const Json &doc)
{
    const auto re = require<std::vector<double>>(doc, "re");
    const auto im = require<std::vector<double>>(doc, "im");
    if (re.size() != im.size() || re.empty())
        throw ValidationError("vector re/im arrays must be non-empty and equal length");
    std::vector<Complex> entries(re.size());
    for (std::size_t j = 0; j < re.size(); ++j)
        entries[j] = Complex(re[j], im[j]);
    return CVector(std::move(entries));
}

Json neighborhood_export(const NeighborhoodList &list, const NeighborhoodParams &params,
                         std::optional<std::size_t> query_index, const CVector *query_vector)
{
    Json doc{
        {"params", neighborhood_params_to_json(params)},
        {"initial_indices", list.initial_indices},
        {"member_indices", list.member_indices},
        {"size", list.size()},
    };
    if (query_index)
        doc["query_index"] = *query_index;
    else if (query_vector != nullptr)
        doc["query_vector"] = cvector_to_json(*query_vector);
    return doc;
}

Json codebook_export(const Codebook &cb, const SolverReport &report,
                     std::span<const CVector> channels, double power_dbw)
{
    Json vectors = Json::array();
    for (const CVector &f : cb.vectors)
        vectors.push_back(cvector_to_json(f));

    const double gain = min_sum_gain(cb, channels);
    Json diags = Json::array();
    for (const SocpDiagnostics &d : report.subproblem_diags)
        diags.push_back(Json{{"newton_steps", d.newton_steps},
                             {"barrier_stages", d.barrier_stages},
                             {"duality_gap", d.duality_gap},
                             {"kkt_residual", d.kkt_residual},
                             {"min_slack", d.min_slack},
                             {"converged", d.converged}});
    return Json{
        {"M", cb.dim()},
        {"L", cb.size()},
        {"P", cb.power},
        {"power_dbw", power_dbw},
        {"vectors", std::move(vectors)},
        {"metrics",
         {{"min_sum_gain", gain},
          {"min_sum_gain_db", to_db(gain)},
          {"neighborhood_size", channels.size()}}},
        {"report",
         {{"t_trace", report.t_trace},
          {"gain_trace", report.gain_trace},
          {"converged", report.converged},
          {"iterations", report.iterations},
          {"best_iteration", report.best_iteration},
          {"init", report.init_label},
          {"subproblems", std::move(diags)}}},
    };
}

std::string format_double(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

} // namespace beamdb
