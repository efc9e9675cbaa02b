// SPDX-License-Identifier: Apache-2.0
//
// metasense: single-antenna THz radar angle estimation with metasurface pairs
// Copyright (C) 2026 The metasense Authors
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
// ------------------------------------------------------------------------

#include "metasense/config.hpp"
#include "metasense/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace metasense
{
    namespace
    {
        using json = nlohmann::json;
        using ordered_json = nlohmann::ordered_json;

        struct FieldError
        {
            std::string pointer;
            std::string message;
        };

        [[noreturn]] void fail(const std::string &pointer, const std::string &message)
        {
            throw FieldError{pointer, message};
        }

        // Forward iterator over the raw text that counts consumed newlines.
        struct LineCountingIterator
        {
            using iterator_category = std::forward_iterator_tag;
            using value_type = char;
            using difference_type = std::ptrdiff_t;
            using pointer = const char *;
            using reference = const char &;

            const char *at = nullptr;
            int *line = nullptr;

            reference operator*() const { return *at; }
            LineCountingIterator &operator++()
            {
                if (*at == '\n')
                    ++*line;
                ++at;
                return *this;
            }
            LineCountingIterator operator++(int)
            {
                LineCountingIterator old = *this;
                ++*this;
                return old;
            }
            bool operator==(const LineCountingIterator &other) const { return at == other.at; }
            bool operator!=(const LineCountingIterator &other) const { return at != other.at; }
        };

        std::string escape_token(const std::string &token)
        {
            std::string out;
            for (const char c : token)
            {
                if (c == '~')
                    out += "~0";
                else if (c == '/')
                    out += "~1";
                else
                    out += c;
            }
            return out;
        }

        // Records the source line of every key and array element, and rejects duplicate keys.
        class LineMapper : public nlohmann::json_sax<json>
        {
        public:
            explicit LineMapper(const int *line) : line_(line) {}

            std::map<std::string, int> lines;
            std::string duplicate;

            bool null() override { return value(); }
            bool boolean(bool) override { return value(); }
            bool number_integer(number_integer_t) override { return value(); }
            bool number_unsigned(number_unsigned_t) override { return value(); }
            bool number_float(number_float_t, const string_t &) override { return value(); }
            bool string(string_t &) override { return value(); }
            bool binary(binary_t &) override { return value(); }

            bool start_object(std::size_t) override
            {
                value();
                frames_.push_back({current_path(), false, 0, {}, {}});
                return true;
            }
            bool key(string_t &k) override
            {
                Frame &f = frames_.back();
                if (!f.keys.insert(k).second)
                {
                    duplicate = f.path + "/" + escape_token(k);
                    lines[duplicate] = 1 + *line_;
                    return false;
                }
                f.key = k;
                lines.emplace(f.path + "/" + escape_token(k), 1 + *line_);
                return true;
            }
            bool end_object() override
            {
                frames_.pop_back();
                return true;
            }
            bool start_array(std::size_t) override
            {
                value();
                frames_.push_back({current_path(), true, 0, {}, {}});
                return true;
            }
            bool end_array() override
            {
                frames_.pop_back();
                return true;
            }
            bool parse_error(std::size_t, const std::string &, const nlohmann::detail::exception &) override
            {
                return false;
            }

        private:
            struct Frame
            {
                std::string path;
                bool array = false;
                std::size_t index = 0;
                std::string key;
                std::set<std::string> keys;
            };

            std::string current_path() const
            {
                if (frames_.empty())
                    return "";
                const Frame &f = frames_.back();
                return f.path + "/" + (f.array ? std::to_string(f.index - 1) : escape_token(f.key));
            }

            bool value()
            {
                if (!frames_.empty() && frames_.back().array)
                {
                    ++frames_.back().index;
                    lines.emplace(current_path(), 1 + *line_);
                }
                return true;
            }

            const int *line_;
            std::vector<Frame> frames_;
        };

        // Typed access to one JSON object with unknown-key rejection.
        class Section
        {
        public:
            Section(const json &node, std::string pointer, std::initializer_list<const char *> allowed)
                : node_(node), pointer_(std::move(pointer))
            {
                if (!node_.is_object())
                    fail(pointer_.empty() ? "/" : pointer_, "expected an object");
                for (const auto &item : node_.items())
                {
                    bool known = false;
                    for (const char *a : allowed)
                        known = known || item.key() == a;
                    if (!known)
                        fail(path(item.key()), "unknown key '" + item.key() + "'");
                }
            }

            bool has(const char *key) const { return node_.contains(key) && !node_.at(key).is_null(); }
            const json &at(const char *key) const { return node_.at(key); }
            std::string path(const std::string &key) const { return pointer_ + "/" + escape_token(key); }

            double number(const char *key, double fallback) const
            {
                if (!has(key))
                    return fallback;
                return number_at(at(key), path(key));
            }

            std::optional<double> optional_number(const char *key) const
            {
                if (!has(key))
                    return std::nullopt;
                return number_at(at(key), path(key));
            }

            long long integer(const char *key, long long fallback) const
            {
                if (!has(key))
                    return fallback;
                const json &v = at(key);
                if (!v.is_number_integer())
                    fail(path(key), "expected an integer");
                return v.get<long long>();
            }

            std::uint64_t unsigned_integer(const char *key, std::uint64_t fallback) const
            {
                if (!has(key))
                    return fallback;
                const json &v = at(key);
                if (!v.is_number_unsigned())
                    fail(path(key), "expected a non-negative integer");
                return v.get<std::uint64_t>();
            }

            bool boolean(const char *key, bool fallback) const
            {
                if (!has(key))
                    return fallback;
                if (!at(key).is_boolean())
                    fail(path(key), "expected true or false");
                return at(key).get<bool>();
            }

            std::string text(const char *key, const std::string &fallback) const
            {
                if (!has(key))
                    return fallback;
                if (!at(key).is_string())
                    fail(path(key), "expected a string");
                return at(key).get<std::string>();
            }

            std::vector<double> numbers(const char *key, std::vector<double> fallback) const
            {
                if (!has(key))
                    return fallback;
                const json &v = at(key);
                if (!v.is_array())
                    fail(path(key), "expected an array of numbers");
                std::vector<double> out;
                for (std::size_t i = 0; i < v.size(); ++i)
                    out.push_back(number_at(v[i], path(key) + "/" + std::to_string(i)));
                return out;
            }

            Point2 point(const char *key, Point2 fallback) const
            {
                if (!has(key))
                    return fallback;
                const std::vector<double> xy = numbers(key, {});
                if (xy.size() != 2)
                    fail(path(key), "expected [x, y]");
                return {xy[0], xy[1]};
            }

            static double number_at(const json &v, const std::string &pointer)
            {
                if (!v.is_number())
                    fail(pointer, "expected a number");
                return v.get<double>();
            }

        private:
            const json &node_;
            std::string pointer_;
        };

        template <typename Enum>
        Enum choice(const Section &s, const char *key, Enum fallback,
                    std::initializer_list<std::pair<const char *, Enum>> options)
        {
            if (!s.has(key))
                return fallback;
            const std::string value = s.text(key, "");
            std::string listed;
            for (const auto &[name, e] : options)
            {
                if (value == name)
                    return e;
                listed += (listed.empty() ? "" : ", ") + std::string(name);
            }
            fail(s.path(key), "'" + value + "' is not one of: " + listed);
        }

        template <typename Enum>
        const char *choice_name(Enum value, std::initializer_list<std::pair<const char *, Enum>> options)
        {
            for (const auto &[name, e] : options)
                if (e == value)
                    return name;
            return "?";
        }

        const std::initializer_list<std::pair<const char *, Solver>> kSolvers{{"lasso", Solver::Lasso},
                                                                              {"omp", Solver::Omp}};
        const std::initializer_list<std::pair<const char *, PipelineMode>> kModes{
            {"joint", PipelineMode::Joint}, {"independent", PipelineMode::Independent}};
        const std::initializer_list<std::pair<const char *, RangeRoot>> kRoots{{"near", RangeRoot::Near},
                                                                               {"far", RangeRoot::Far}};
        const std::initializer_list<std::pair<const char *, SweepKind>> kSweeps{
            {"none", SweepKind::None}, {"snr", SweepKind::Snr}, {"bandwidth", SweepKind::Bandwidth}};
        const std::initializer_list<std::pair<const char *, TrialEstimator>> kEstimators{
            {"sparse", TrialEstimator::Sparse}, {"brute", TrialEstimator::Brute}};

        double parse_snr(const Section &s, const char *key, double fallback)
        {
            if (!s.has(key))
                return fallback;
            const json &v = s.at(key);
            if (v.is_string())
            {
                if (v.get<std::string>() == "inf")
                    return std::numeric_limits<double>::infinity();
                fail(s.path(key), "expected a number or \"inf\"");
            }
            return Section::number_at(v, s.path(key));
        }

        ScenarioConfig from_json(const json &root)
        {
            ScenarioConfig c;
            const Section top(root, "",
                              {"description", "waveform", "scene", "surfaces", "targets", "noise", "estimation",
                               "coherence", "montecarlo", "output"});
            if (top.has("description"))
                (void)top.text("description", "");

            if (top.has("waveform"))
            {
                const Section s(top.at("waveform"), "/waveform", {"carrier_hz", "bandwidth_hz", "duration_s", "samples"});
                c.waveform.carrier_hz = s.number("carrier_hz", c.waveform.carrier_hz);
                c.waveform.bandwidth_hz = s.number("bandwidth_hz", c.waveform.bandwidth_hz);
                c.waveform.duration_s = s.number("duration_s", c.waveform.duration_s);
                const long long k = s.integer("samples", c.waveform.samples);
                if (k < 2 || k > 1'000'000)
                    fail(s.path("samples"), "must be in [2, 1000000]");
                c.waveform.samples = static_cast<int>(k);
            }
            if (top.has("scene"))
            {
                const Section s(top.at("scene"), "/scene", {"radar", "surface1", "surface2"});
                c.radar = s.point("radar", c.radar);
                c.surface1 = s.point("surface1", c.surface1);
                c.surface2 = s.point("surface2", c.surface2);
            }
            if (top.has("surfaces"))
            {
                const Section s(top.at("surfaces"), "/surfaces",
                                {"elements", "spacing_m", "steer_deg", "design_frequency_hz", "weights"});
                const long long n = s.integer("elements", c.surfaces.elements);
                if (n < 1 || n > 1'000'000)
                    fail(s.path("elements"), "must be in [1, 1000000]");
                c.surfaces.elements = static_cast<int>(n);
                c.surfaces.spacing_m = s.optional_number("spacing_m");
                c.surfaces.design_frequency_hz = s.optional_number("design_frequency_hz");
                const auto steer = s.numbers("steer_deg", {c.surfaces.steer_deg[0], c.surfaces.steer_deg[1]});
                if (steer.size() != 2)
                    fail(s.path("steer_deg"), "expected two steering angles");
                c.surfaces.steer_deg = {steer[0], steer[1]};
                const auto w = s.numbers("weights", {c.surfaces.weights[0], c.surfaces.weights[1]});
                if (w.size() != 2)
                    fail(s.path("weights"), "expected two weights");
                c.surfaces.weights = {w[0], w[1]};
            }
            if (top.has("targets"))
            {
                const json &list = top.at("targets");
                if (!list.is_array())
                    fail("/targets", "expected an array of targets");
                for (std::size_t i = 0; i < list.size(); ++i)
                {
                    const std::string ptr = "/targets/" + std::to_string(i);
                    const Section s(list[i], ptr, {"theta_deg", "s1_m", "x", "y", "rcs"});
                    TargetConfig t;
                    const bool polar = s.has("theta_deg") || s.has("s1_m");
                    const bool cart = s.has("x") || s.has("y");
                    if (polar == cart)
                        fail(ptr, "give either theta_deg and s1_m or x and y");
                    t.polar = polar;
                    if (polar)
                    {
                        if (!s.has("theta_deg") || !s.has("s1_m"))
                            fail(ptr, "polar placement needs both theta_deg and s1_m");
                        t.theta_deg = s.number("theta_deg", 0.0);
                        t.s1_m = s.number("s1_m", 0.0);
                    }
                    else
                    {
                        if (!s.has("x") || !s.has("y"))
                            fail(ptr, "cartesian placement needs both x and y");
                        t.position = {s.number("x", 0.0), s.number("y", 0.0)};
                    }
                    t.rcs = s.number("rcs", 1.0);
                    c.targets.push_back(t);
                }
            }
            if (top.has("noise"))
            {
                const Section s(top.at("noise"), "/noise", {"snr_db", "seed"});
                c.noise.snr_db = parse_snr(s, "snr_db", c.noise.snr_db);
                c.noise.seed = s.unsigned_integer("seed", c.noise.seed);
            }
            if (top.has("estimation"))
            {
                const Section s(top.at("estimation"), "/estimation",
                                {"angle_step_deg", "solver", "pipeline", "lambda_fraction", "lambda", "max_iter", "tol",
                                 "supports_per_range", "brute_budget", "amplitude_refit", "range_root"});
                EstimationConfig &e = c.estimation;
                e.angle_step_deg = s.number("angle_step_deg", e.angle_step_deg);
                e.solver = choice(s, "solver", e.solver, kSolvers);
                e.pipeline = choice(s, "pipeline", e.pipeline, kModes);
                e.lambda_fraction = s.number("lambda_fraction", e.lambda_fraction);
                e.lambda = s.optional_number("lambda");
                const long long it = s.integer("max_iter", e.max_iter);
                if (it < 1 || it > 100'000'000)
                    fail(s.path("max_iter"), "must be in [1, 1e8]");
                e.max_iter = static_cast<int>(it);
                e.tol = s.number("tol", e.tol);
                const long long sup = s.integer("supports_per_range", e.supports_per_range);
                if (sup < 1 || sup > 1000)
                    fail(s.path("supports_per_range"), "must be in [1, 1000]");
                e.supports_per_range = static_cast<int>(sup);
                e.brute_budget = s.unsigned_integer("brute_budget", e.brute_budget);
                e.amplitude_refit = s.boolean("amplitude_refit", e.amplitude_refit);
                e.range_root = choice(s, "range_root", e.range_root, kRoots);
            }
            if (top.has("coherence"))
            {
                const Section s(top.at("coherence"), "/coherence", {"range_m", "bandwidths_hz", "db_down"});
                c.coherence.range_m = s.optional_number("range_m");
                c.coherence.bandwidths_hz = s.numbers("bandwidths_hz", c.coherence.bandwidths_hz);
                c.coherence.db_down = s.number("db_down", c.coherence.db_down);
            }
            if (top.has("montecarlo"))
            {
                const Section s(top.at("montecarlo"), "/montecarlo",
                                {"trials", "sweep", "values", "random_rcs", "estimator"});
                const long long n = s.integer("trials", c.montecarlo.trials);
                if (n < 1 || n > 100'000'000)
                    fail(s.path("trials"), "must be in [1, 1e8]");
                c.montecarlo.trials = static_cast<int>(n);
                c.montecarlo.sweep = choice(s, "sweep", c.montecarlo.sweep, kSweeps);
                if (s.has("values"))
                {
                    const json &v = s.at("values");
                    if (!v.is_array())
                        fail(s.path("values"), "expected an array");
                    for (std::size_t i = 0; i < v.size(); ++i)
                    {
                        const std::string ptr = s.path("values") + "/" + std::to_string(i);
                        if (v[i].is_string() && v[i].get<std::string>() == "inf")
                            c.montecarlo.values.push_back(std::numeric_limits<double>::infinity());
                        else
                            c.montecarlo.values.push_back(Section::number_at(v[i], ptr));
                    }
                }
                c.montecarlo.random_rcs = s.boolean("random_rcs", c.montecarlo.random_rcs);
                c.montecarlo.estimator = choice(s, "estimator", c.montecarlo.estimator, kEstimators);
            }
            if (top.has("output"))
            {
                const Section s(top.at("output"), "/output", {"directory"});
                c.output_dir = s.text("directory", c.output_dir);
            }
            return c;
        }

        bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

        void check_angle(double deg, const std::string &ptr)
        {
            if (!(deg > 0.0 && deg < 180.0))
                fail(ptr, "angle must be in (0, 180) degrees");
        }

        void validate_impl(ScenarioConfig &c)
        {
            c.warnings.clear();
            try
            {
                c.waveform.validate();
            }
            catch (const ConfigError &e)
            {
                fail("/waveform", e.what());
            }

            std::optional<SceneGeometry> scene;
            try
            {
                scene.emplace(make_scene(c));
            }
            catch (const Error &e)
            {
                fail("/scene", e.what());
            }

            const SurfaceConfig &sf = c.surfaces;
            if (sf.spacing_m && !positive_finite(*sf.spacing_m))
                fail("/surfaces/spacing_m", "must be positive");
            if (sf.design_frequency_hz && !positive_finite(*sf.design_frequency_hz))
                fail("/surfaces/design_frequency_hz", "must be positive");
            for (int i = 0; i < 2; ++i)
            {
                check_angle(sf.steer_deg[static_cast<std::size_t>(i)], "/surfaces/steer_deg/" + std::to_string(i));
                const double w = sf.weights[static_cast<std::size_t>(i)];
                if (!(w >= 0.0) || !std::isfinite(w))
                    fail("/surfaces/weights/" + std::to_string(i), "weight must be finite and non-negative");
            }
            if (sf.weights[0] == 0.0 && sf.weights[1] == 0.0)
                fail("/surfaces/weights", "at least one surface must be active");

            if (c.targets.empty())
                fail("/targets", "at least one target is required");
            for (std::size_t i = 0; i < c.targets.size(); ++i)
            {
                const std::string ptr = "/targets/" + std::to_string(i);
                const TargetConfig &t = c.targets[i];
                if (!(t.rcs >= 0.0) || !std::isfinite(t.rcs))
                    fail(ptr + "/rcs", "rcs must be finite and non-negative");
                if (t.rcs == 0.0)
                    c.warnings.push_back(ptr + ": rcs is 0, the target produces no echo");
                else if (t.rcs > 1.0)
                    c.warnings.push_back(ptr + ": rcs above 1");
                if (t.polar)
                {
                    check_angle(t.theta_deg, ptr + "/theta_deg");
                    if (!positive_finite(t.s1_m))
                        fail(ptr + "/s1_m", "distance must be positive");
                }
                else if (!std::isfinite(t.position.x) || !std::isfinite(t.position.y))
                    fail(ptr, "coordinates must be finite");

                const Point2 pos = t.polar ? polar_to_point(*scene, {deg2rad(t.theta_deg), t.s1_m}) : t.position;
                PathLengths paths;
                try
                {
                    paths = exact_path_lengths(*scene, pos);
                }
                catch (const Error &e)
                {
                    fail(ptr, e.what());
                }
                const FarFieldAngles ff = far_field_angles(*scene, pos);
                if (ff.on_axis || ff.shadow_side)
                    fail(ptr, "target must lie on the radar side of the surface axis");
                if (ff.near_field)
                    c.warnings.push_back(ptr + ": inside the far-field exclusion radius (10 d)");
                const PolarPlacement polar = point_to_polar(*scene, pos);
                if (!range_is_feasible(*scene, paths.p, polar.theta))
                    fail(ptr, "range is not reconcilable with the target angle");
                const double s = s1_from_range(*scene, paths.p, polar.theta, c.estimation.range_root);
                if (std::abs(s - polar.distance) > 1e-6 * std::max(1.0, polar.distance))
                    c.warnings.push_back(ptr + ": target lies on the other law-of-cosines root than range_root");
            }

            if (std::isnan(c.noise.snr_db) || c.noise.snr_db == -std::numeric_limits<double>::infinity())
                fail("/noise/snr_db", "must be a finite number or \"inf\"");

            const EstimationConfig &e = c.estimation;
            if (!(e.angle_step_deg > 0.0 && e.angle_step_deg < 90.0))
                fail("/estimation/angle_step_deg", "must be in (0, 90)");
            if (!positive_finite(e.lambda_fraction))
                fail("/estimation/lambda_fraction", "must be positive");
            if (e.lambda && !positive_finite(*e.lambda))
                fail("/estimation/lambda", "must be positive");
            if (!positive_finite(e.tol))
                fail("/estimation/tol", "must be positive");
            if (e.brute_budget < 1)
                fail("/estimation/brute_budget", "must be at least 1");

            if (c.coherence.range_m && !positive_finite(*c.coherence.range_m))
                fail("/coherence/range_m", "must be positive");
            if (c.coherence.bandwidths_hz.empty())
                fail("/coherence/bandwidths_hz", "at least one bandwidth is required");
            for (std::size_t i = 0; i < c.coherence.bandwidths_hz.size(); ++i)
            {
                const double bw = c.coherence.bandwidths_hz[i];
                if (!(bw > 0.0 && bw < c.waveform.carrier_hz))
                    fail("/coherence/bandwidths_hz/" + std::to_string(i), "must satisfy 0 < bandwidth < carrier");
            }
            if (!positive_finite(c.coherence.db_down))
                fail("/coherence/db_down", "must be positive");

            const MonteCarloConfig &mc = c.montecarlo;
            if (mc.sweep != SweepKind::None && mc.values.empty())
                fail("/montecarlo/values", "a sweep needs at least one value");
            for (std::size_t i = 0; i < mc.values.size(); ++i)
            {
                const double v = mc.values[i];
                const std::string ptr = "/montecarlo/values/" + std::to_string(i);
                if (mc.sweep == SweepKind::Bandwidth && !(v > 0.0 && v < c.waveform.carrier_hz))
                    fail(ptr, "bandwidth must satisfy 0 < bandwidth < carrier");
                if (mc.sweep == SweepKind::Snr && (std::isnan(v) || v == -std::numeric_limits<double>::infinity()))
                    fail(ptr, "snr must be a number or \"inf\"");
            }
            if (c.threads < 1)
                fail("/threads", "must be at least 1");
        }

        int line_of(const std::map<std::string, int> &lines, std::string pointer)
        {
            while (true)
            {
                const auto it = lines.find(pointer);
                if (it != lines.end())
                    return it->second;
                const auto slash = pointer.rfind('/');
                if (slash == std::string::npos || pointer.empty())
                    return 1;
                pointer.resize(slash);
            }
        }

        ordered_json number_or_inf(double v)
        {
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            return v;
        }
    }

    ScenarioConfig parse_config(const std::string &text, const std::string &source)
    {
        int newlines = 0;
        LineMapper mapper(&newlines);
        const LineCountingIterator first{text.data(), &newlines};
        const LineCountingIterator last{text.data() + text.size(), &newlines};
        const bool sax_ok = json::sax_parse(first, last, &mapper);

        json root;
        try
        {
            root = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
            const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte > 0 ? byte - 1 : 0), '\n'));
            std::string msg = e.what();
            const auto colon = msg.find(": ");
            if (colon != std::string::npos && msg.rfind("[json.exception", 0) == 0)
                msg = msg.substr(colon + 2);
            throw ConfigError(source + ":" + std::to_string(line) + ": syntax error: " + msg);
        }
        if (!sax_ok && !mapper.duplicate.empty())
            throw ConfigError(source + ":" + std::to_string(line_of(mapper.lines, mapper.duplicate)) + ": " +
                              mapper.duplicate + ": duplicate key");

        try
        {
            ScenarioConfig config = from_json(root);
            validate_impl(config);
            return config;
        }
        catch (const FieldError &e)
        {
            throw ConfigError(source + ":" + std::to_string(line_of(mapper.lines, e.pointer)) + ": " +
                              (e.pointer.empty() ? "/" : e.pointer) + ": " + e.message);
        }
    }

    ScenarioConfig load_config(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw IoError("cannot open config file '" + path + "'");
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return parse_config(buffer.str(), path);
    }

    void validate_config(ScenarioConfig &config)
    {
        try
        {
            validate_impl(config);
        }
        catch (const FieldError &e)
        {
            throw ConfigError(e.pointer + ": " + e.message);
        }
    }

    std::string canonical_json(const ScenarioConfig &c)
    {
        ordered_json j;
        j["waveform"] = {{"carrier_hz", c.waveform.carrier_hz},
                         {"bandwidth_hz", c.waveform.bandwidth_hz},
                         {"duration_s", c.waveform.duration_s},
                         {"samples", c.waveform.samples}};
        j["scene"] = {{"radar", {c.radar.x, c.radar.y}},
                      {"surface1", {c.surface1.x, c.surface1.y}},
                      {"surface2", {c.surface2.x, c.surface2.y}}};
        const SurfacePair pair = make_surfaces(c);
        j["surfaces"] = {{"elements", c.surfaces.elements},
                         {"spacing_m", pair.first.ula.spacing},
                         {"steer_deg", {c.surfaces.steer_deg[0], c.surfaces.steer_deg[1]}},
                         {"design_frequency_hz", c.surfaces.design_frequency_hz.value_or(c.waveform.carrier_hz)},
                         {"weights", {c.surfaces.weights[0], c.surfaces.weights[1]}}};
        ordered_json targets = ordered_json::array();
        for (const TargetConfig &t : c.targets)
        {
            if (t.polar)
                targets.push_back({{"theta_deg", t.theta_deg}, {"s1_m", t.s1_m}, {"rcs", t.rcs}});
            else
                targets.push_back({{"x", t.position.x}, {"y", t.position.y}, {"rcs", t.rcs}});
        }
        j["targets"] = targets;
        j["noise"] = {{"snr_db", number_or_inf(c.noise.snr_db)}};
        const EstimationConfig &e = c.estimation;
        j["estimation"] = {{"angle_step_deg", e.angle_step_deg},
                           {"solver", choice_name(e.solver, kSolvers)},
                           {"pipeline", choice_name(e.pipeline, kModes)},
                           {"lambda_fraction", e.lambda_fraction},
                           {"lambda", e.lambda ? ordered_json(*e.lambda) : ordered_json(nullptr)},
                           {"max_iter", e.max_iter},
                           {"tol", e.tol},
                           {"supports_per_range", e.supports_per_range},
                           {"brute_budget", e.brute_budget},
                           {"amplitude_refit", e.amplitude_refit},
                           {"range_root", choice_name(e.range_root, kRoots)}};
        j["coherence"] = {{"range_m", c.coherence.range_m ? ordered_json(*c.coherence.range_m) : ordered_json(nullptr)},
                          {"bandwidths_hz", c.coherence.bandwidths_hz},
                          {"db_down", c.coherence.db_down}};
        ordered_json values = ordered_json::array();
        for (const double v : c.montecarlo.values)
            values.push_back(number_or_inf(v));
        j["montecarlo"] = {{"trials", c.montecarlo.trials},
                           {"sweep", choice_name(c.montecarlo.sweep, kSweeps)},
                           {"values", values},
                           {"random_rcs", c.montecarlo.random_rcs},
                           {"estimator", choice_name(c.montecarlo.estimator, kEstimators)}};
        return j.dump();
    }

    std::string config_hash(const ScenarioConfig &config)
    {
        std::uint64_t h = 14695981039346656037ull;
        for (const unsigned char c : canonical_json(config))
        {
            h ^= c;
            h *= 1099511628211ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    SceneGeometry make_scene(const ScenarioConfig &config)
    {
        return SceneGeometry(config.radar, config.surface1, config.surface2);
    }

    SurfacePair make_surfaces(const ScenarioConfig &config)
    {
        const SceneGeometry scene = make_scene(config);
        const double f_design = config.surfaces.design_frequency_hz.value_or(config.waveform.carrier_hz);
        const double k_design = 2.0 * kPi * f_design / kSpeedOfLight;
        const double spacing = config.surfaces.spacing_m.value_or(kPi / config.waveform.carrier_wavenumber());
        const UlaSpec ula{config.surfaces.elements, spacing};
        ula.validate();
        SurfacePair pair;
        pair.first = {ula, beamform_profile(ula, k_design, deg2rad(config.surfaces.steer_deg[0]), scene.incidence_angle()),
                      config.surfaces.weights[0]};
        pair.second = {ula, beamform_profile(ula, k_design, deg2rad(config.surfaces.steer_deg[1]), scene.incidence_angle()),
                       config.surfaces.weights[1]};
        return pair;
    }

    ForwardModel make_model(const ScenarioConfig &config)
    {
        return ForwardModel{FrequencyGrid(config.waveform), make_scene(config), make_surfaces(config),
                            config.estimation.range_root};
    }

    std::vector<Target> make_targets(const ScenarioConfig &config, const SceneGeometry &scene)
    {
        std::vector<Target> out;
        for (const TargetConfig &t : config.targets)
            out.push_back({t.polar ? polar_to_point(scene, {deg2rad(t.theta_deg), t.s1_m}) : t.position, t.rcs});
        return out;
    }

    PipelineConfig make_pipeline_config(const ScenarioConfig &config)
    {
        PipelineConfig p;
        p.solver = config.estimation.solver;
        p.mode = config.estimation.pipeline;
        p.lambda_fraction = config.estimation.lambda_fraction;
        p.lambda = config.estimation.lambda;
        p.max_iter = config.estimation.max_iter;
        p.tol = config.estimation.tol;
        p.supports_per_range = config.estimation.supports_per_range;
        p.threads = config.threads;
        return p;
    }

    BruteForceOptions make_brute_options(const ScenarioConfig &config)
    {
        BruteForceOptions o;
        o.amplitude_refit = config.estimation.amplitude_refit;
        o.budget = config.estimation.brute_budget;
        o.threads = config.threads;
        return o;
    }
}
