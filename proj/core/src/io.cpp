#include "tmadf/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace tmadf {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

// ---------------------------------------------------------------------------
// Scenario JSON

namespace {

class Reader {
public:
    std::vector<Violation> violations;

    void malformed(const std::string& field, const std::string& message) {
        violations.push_back({ViolationKind::MalformedConfig, field, message});
    }

    bool object(const json& j, const std::string& field, std::initializer_list<const char*> allowed) {
        if (!j.is_object()) {
            malformed(field, "expected an object");
            return false;
        }
        const std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& [key, _] : j.items())
            if (!keys.count(key)) malformed(field.empty() ? key : field + "." + key, "unknown key");
        return true;
    }

    template <typename T>
    void number(const json& obj, const char* key, const std::string& prefix, T& out, bool required) {
        const std::string field = prefix + "." + key;
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) malformed(field, "missing required key");
            return;
        }
        if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) {
                malformed(field, "expected an integer");
                return;
            }
            if constexpr (std::is_unsigned_v<T>) {
                if (it->is_number_unsigned())
                    out = it->template get<T>();
                else if (it->template get<std::int64_t>() >= 0)
                    out = static_cast<T>(it->template get<std::int64_t>());
                else
                    malformed(field, "expected a non-negative integer");
            } else {
                const auto v = it->template get<std::int64_t>();
                if (v < std::numeric_limits<T>::min() || v > std::numeric_limits<T>::max())
                    malformed(field, "integer out of range");
                else
                    out = static_cast<T>(v);
            }
        } else {
            if (!it->is_number()) {
                malformed(field, "expected a number");
                return;
            }
            out = it->template get<T>();
        }
    }
};

}  // namespace

ScenarioConfig scenario_config_from_json(const json& j) {
    Reader r;
    ScenarioConfig cfg;
    if (!r.object(j, "", {"schema_version", "description", "geometry", "sources", "modulation", "sampling"}))
        throw ValidationError(std::move(r.violations));

    for (const char* key : {"geometry", "sources", "modulation", "sampling"})
        if (!j.contains(key)) r.malformed(key, "missing required key");

    if (j.contains("geometry") && r.object(j["geometry"], "geometry",
                                           {"element_count", "element_spacing_m", "propagation_speed_mps",
                                            "carrier_frequency_hz"})) {
        const auto& g = j["geometry"];
        r.number(g, "element_count", "geometry", cfg.geometry.element_count, true);
        r.number(g, "element_spacing_m", "geometry", cfg.geometry.element_spacing_m, true);
        r.number(g, "propagation_speed_mps", "geometry", cfg.geometry.propagation_speed_mps, false);
        r.number(g, "carrier_frequency_hz", "geometry", cfg.geometry.carrier_frequency_hz, true);
    }

    if (j.contains("sources")) {
        const auto& arr = j["sources"];
        if (!arr.is_array()) {
            r.malformed("sources", "expected an array");
        } else {
            for (std::size_t i = 0; i < arr.size(); ++i) {
                const std::string prefix = "sources[" + std::to_string(i) + "]";
                SourceSpec s;
                if (!r.object(arr[i], prefix, {"angle_deg", "amplitude", "baseband_frequency_hz", "bandwidth_hz"}))
                    continue;
                const auto& o = arr[i];
                r.number(o, "angle_deg", prefix, s.angle_deg, true);
                r.number(o, "baseband_frequency_hz", prefix, s.baseband_frequency_hz, true);
                if (o.contains("bandwidth_hz")) {
                    double b = 0.0;
                    r.number(o, "bandwidth_hz", prefix, b, false);
                    s.bandwidth_hz = b;
                }
                if (!o.contains("amplitude")) {
                    r.malformed(prefix + ".amplitude", "missing required key");
                } else {
                    const auto& a = o["amplitude"];
                    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                        r.malformed(prefix + ".amplitude", "expected [re, im]");
                    else
                        s.amplitude = Complex(a[0].get<double>(), a[1].get<double>());
                }
                cfg.sources.push_back(s);
            }
        }
    }

    if (j.contains("modulation") &&
        r.object(j["modulation"], "modulation",
                 {"base_frequency_hz", "harmonic_orders", "narrowband_ratio_min", "coefficient_model"})) {
        const auto& m = j["modulation"];
        r.number(m, "base_frequency_hz", "modulation", cfg.modulation.base_frequency_hz, true);
        r.number(m, "narrowband_ratio_min", "modulation", cfg.modulation.narrowband_ratio_min, false);
        if (m.contains("harmonic_orders")) {
            const auto& ho = m["harmonic_orders"];
            bool ok = ho.is_array();
            std::vector<int> orders;
            if (ok)
                for (const auto& k : ho) {
                    if (!k.is_number_integer()) {
                        ok = false;
                        break;
                    }
                    orders.push_back(k.get<int>());
                }
            if (ok)
                cfg.modulation.harmonic_orders = std::move(orders);
            else
                r.malformed("modulation.harmonic_orders", "expected an array of integers");
        }
        if (m.contains("coefficient_model")) {
            const auto& cm = m["coefficient_model"];
            if (cm == "sampled")
                cfg.modulation.coefficient_model = CoefficientModel::Sampled;
            else if (cm == "analytic")
                cfg.modulation.coefficient_model = CoefficientModel::Analytic;
            else
                r.malformed("modulation.coefficient_model", "expected \"sampled\" or \"analytic\"");
        }
    }

    if (j.contains("sampling") &&
        r.object(j["sampling"], "sampling",
                 {"sample_rate_hz", "window_count", "window_stride_s", "start_time_s", "snr_db", "rng_seed"})) {
        const auto& s = j["sampling"];
        r.number(s, "sample_rate_hz", "sampling", cfg.sampling.sample_rate_hz, true);
        r.number(s, "window_count", "sampling", cfg.sampling.window_count, true);
        r.number(s, "start_time_s", "sampling", cfg.sampling.start_time_s, false);
        r.number(s, "rng_seed", "sampling", cfg.sampling.rng_seed, false);
        if (s.contains("window_stride_s"))
            r.number(s, "window_stride_s", "sampling", cfg.sampling.window_stride_s, false);
        else if (cfg.modulation.base_frequency_hz > 0.0)
            cfg.sampling.window_stride_s = 1.0 / cfg.modulation.base_frequency_hz;
        if (s.contains("snr_db") && !s["snr_db"].is_null()) {
            double snr = 0.0;
            r.number(s, "snr_db", "sampling", snr, false);
            cfg.sampling.snr_db = snr;
        }
    }

    if (!r.violations.empty()) throw ValidationError(std::move(r.violations));
    return cfg;
}

json to_json(const ScenarioConfig& c) {
    json sources = json::array();
    for (const auto& s : c.sources) {
        json o = {{"angle_deg", s.angle_deg},
                  {"amplitude", {s.amplitude.real(), s.amplitude.imag()}},
                  {"baseband_frequency_hz", s.baseband_frequency_hz}};
        if (s.bandwidth_hz) o["bandwidth_hz"] = *s.bandwidth_hz;
        sources.push_back(std::move(o));
    }
    return {
        {"geometry",
         {{"element_count", c.geometry.element_count},
          {"element_spacing_m", c.geometry.element_spacing_m},
          {"propagation_speed_mps", c.geometry.propagation_speed_mps},
          {"carrier_frequency_hz", c.geometry.carrier_frequency_hz}}},
        {"sources", sources},
        {"modulation",
         {{"base_frequency_hz", c.modulation.base_frequency_hz},
          {"harmonic_orders", c.modulation.harmonic_orders},
          {"narrowband_ratio_min", c.modulation.narrowband_ratio_min},
          {"coefficient_model",
           c.modulation.coefficient_model == CoefficientModel::Sampled ? "sampled" : "analytic"}}},
        {"sampling",
         {{"sample_rate_hz", c.sampling.sample_rate_hz},
          {"window_count", c.sampling.window_count},
          {"window_stride_s", c.sampling.window_stride_s},
          {"start_time_s", c.sampling.start_time_s},
          {"snr_db", c.sampling.snr_db ? json(*c.sampling.snr_db) : json(nullptr)},
          {"rng_seed", c.sampling.rng_seed}}},
    };
}

ScenarioConfig load_scenario_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError({{ViolationKind::MalformedConfig, path.string(), e.what()}});
    }
    return scenario_config_from_json(j);
}

Scenario load_scenario(const fs::path& path) { return validate(load_scenario_config(path)); }

json violations_to_json(const std::vector<Violation>& violations) {
    json arr = json::array();
    for (const auto& v : violations)
        arr.push_back({{"kind", std::string(to_string(v.kind))}, {"field", v.field}, {"message", v.message}});
    return {{"schema_version", kSchemaVersion}, {"violations", arr}};
}

// ---------------------------------------------------------------------------
// Snapshot and spectrum exports

std::string snapshots_csv(const SnapshotMatrix& snapshots, std::span<const CVector> oracle,
                          std::span<const double> column_errors) {
    const bool with_oracle = !oracle.empty();
    std::ostringstream os;
    os << "window_index,order_k,element_n,re,im";
    if (with_oracle) os << ",ideal_re,ideal_im,column_rel_error";
    os << "\r\n";
    for (std::size_t c = 0; c < snapshots.snapshot_count(); ++c) {
        const auto& meta = snapshots.columns[c];
        for (std::size_t n = 0; n < snapshots.element_count(); ++n) {
            const Complex v = snapshots.values(n, c);
            os << meta.window << ',' << meta.order << ',' << n + 1 << ',' << format_double(v.real()) << ','
               << format_double(v.imag());
            if (with_oracle) {
                const Complex ideal = oracle[c][n];
                os << ',' << format_double(ideal.real()) << ',' << format_double(ideal.imag()) << ','
                   << format_double(c < column_errors.size() ? column_errors[c] : std::nan(""));
            }
            os << "\r\n";
        }
    }
    return os.str();
}

json snapshots_json(const SnapshotMatrix& snapshots) {
    json cols = json::array();
    for (std::size_t c = 0; c < snapshots.snapshot_count(); ++c) {
        json gamma = json::array();
        for (std::size_t n = 0; n < snapshots.element_count(); ++n)
            gamma.push_back({snapshots.values(n, c).real(), snapshots.values(n, c).imag()});
        cols.push_back({{"window_index", snapshots.columns[c].window},
                        {"order_k", snapshots.columns[c].order},
                        {"gamma", gamma}});
    }
    return {{"schema_version", kSchemaVersion},
            {"element_count", snapshots.element_count()},
            {"snapshot_count", snapshots.snapshot_count()},
            {"snapshots", cols}};
}

namespace {

std::vector<double> to_db(const SpatialSpectrum& s) {
    const double peak = s.values.empty() ? 1.0 : *std::max_element(s.values.begin(), s.values.end());
    std::vector<double> db;
    db.reserve(s.values.size());
    for (double v : s.values) db.push_back(10.0 * std::log10(v / peak));
    return db;
}

}  // namespace

std::string spectrum_csv(const SpatialSpectrum& spectrum) {
    const auto db = to_db(spectrum);
    std::ostringstream os;
    os << "theta_deg,p_linear,p_db\r\n";
    for (std::size_t i = 0; i < spectrum.grid_deg.size(); ++i)
        os << format_double(spectrum.grid_deg[i]) << ',' << format_double(spectrum.values[i]) << ','
           << format_double(db[i]) << "\r\n";
    return os.str();
}

json spectrum_json(const SpatialSpectrum& spectrum) {
    json peaks = json::array();
    for (const auto& p : spectrum.peaks)
        peaks.push_back({{"angle_deg", p.angle_deg}, {"p_linear", p.value}});
    return {{"schema_version", kSchemaVersion},
            {"source_count", spectrum.source_count},
            {"grid",
             {{"first_deg", spectrum.grid_deg.empty() ? 0.0 : spectrum.grid_deg.front()},
              {"last_deg", spectrum.grid_deg.empty() ? 0.0 : spectrum.grid_deg.back()},
              {"points", spectrum.grid_deg.size()}}},
            {"peaks", peaks}};
}

std::string spectrum_svg(const SpatialSpectrum& spectrum, std::span<const double> true_angles_deg) {
    constexpr double width = 800, height = 420, left = 60, right = 20, top = 20, bottom = 50;
    constexpr double db_floor = -60.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto x_of = [&](double deg) { return left + (deg + 90.0) / 180.0 * plot_w; };
    auto y_of = [&](double db) { return top + (-std::max(db, db_floor)) / -db_floor * plot_h; };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    for (int deg = -90; deg <= 90; deg += 30) {
        const double x = x_of(deg);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << top << "\" x2=\"" << fmt(x) << "\" y2=\"" << top + plot_h
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << fmt(x) << "\" y=\"" << top + plot_h + 18 << "\" font-size=\"12\" text-anchor=\"middle\">"
           << deg << "</text>\n";
    }
    for (int db = 0; db >= static_cast<int>(db_floor); db -= 10) {
        const double y = y_of(db);
        os << "<line x1=\"" << left << "\" y1=\"" << fmt(y) << "\" x2=\"" << left + plot_w << "\" y2=\"" << fmt(y)
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4) << "\" font-size=\"12\" text-anchor=\"end\">" << db
           << "</text>\n";
    }
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
       << "\" font-size=\"13\" text-anchor=\"middle\">theta (deg)</text>\n";
    os << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << top + plot_h / 2 << ")\">P (dB)</text>\n";
    for (double t : true_angles_deg) {
        const double x = x_of(t);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << top << "\" x2=\"" << fmt(x) << "\" y2=\"" << top + plot_h
           << "\" stroke=\"red\" stroke-dasharray=\"4 3\"/>\n";
    }
    const auto db = to_db(spectrum);
    os << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < db.size(); ++i) {
        if (i) os << ' ';
        os << fmt(x_of(spectrum.grid_deg[i])) << ',' << fmt(y_of(db[i]));
    }
    os << "\"/>\n";
    const double peak_value = spectrum.values.empty() ? 1.0 : *std::max_element(spectrum.values.begin(), spectrum.values.end());
    for (const auto& p : spectrum.peaks) {
        os << "<circle cx=\"" << fmt(x_of(p.angle_deg)) << "\" cy=\"" << fmt(y_of(10.0 * std::log10(p.value / peak_value)))
           << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Element-signal dump

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return out;
}

void put_double(std::ostream& os, double d) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(d));
    os.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
}

double get_double(std::istream& is) {
    std::uint64_t bits = 0;
    is.read(reinterpret_cast<char*>(&bits), sizeof(bits));
    return std::bit_cast<double>(to_little_endian(bits));
}

fs::path with_suffix(const fs::path& prefix, const char* suffix) {
    fs::path p = prefix;
    p += suffix;
    return p;
}

}  // namespace

void write_element_signals(const ElementSignals& signals, const fs::path& prefix) {
    if (!signals.aligned()) throw Error(ErrorCode::LengthMismatch, "element series not aligned");
    std::ofstream bin(with_suffix(prefix, ".bin"), std::ios::binary);
    if (!bin) throw Error(ErrorCode::Io, "cannot write " + with_suffix(prefix, ".bin").string());
    for (const auto& e : signals.elements)
        for (const auto& x : e.samples) {
            put_double(bin, x.real());
            put_double(bin, x.imag());
        }
    const double t0 = signals.elements.empty() ? 0.0 : signals.elements.front().start_time;
    const double fs_hz = signals.elements.empty() ? 0.0 : signals.elements.front().sample_rate;
    const json meta = {{"schema_version", kSchemaVersion},
                       {"t0", t0},
                       {"f_s", fs_hz},
                       {"N", signals.element_count()},
                       {"length", signals.length()},
                       {"layout", "element-major, float64 little-endian, re/im interleaved"}};
    std::ofstream side(with_suffix(prefix, ".json"));
    if (!side) throw Error(ErrorCode::Io, "cannot write " + with_suffix(prefix, ".json").string());
    side << meta.dump(2) << '\n';
    if (!bin || !side) throw Error(ErrorCode::Io, "write failed for " + prefix.string());
}

ElementSignals read_element_signals(const fs::path& prefix) {
    std::ifstream side(with_suffix(prefix, ".json"));
    if (!side) throw Error(ErrorCode::Io, "cannot open " + with_suffix(prefix, ".json").string());
    const json meta = json::parse(side);
    const auto n = meta.at("N").get<std::size_t>();
    const auto len = meta.at("length").get<std::size_t>();
    std::ifstream bin(with_suffix(prefix, ".bin"), std::ios::binary);
    if (!bin) throw Error(ErrorCode::Io, "cannot open " + with_suffix(prefix, ".bin").string());
    ElementSignals out;
    out.elements.resize(n);
    for (auto& e : out.elements) {
        e.start_time = meta.at("t0").get<double>();
        e.sample_rate = meta.at("f_s").get<double>();
        e.samples.resize(len);
        for (auto& x : e.samples) {
            const double re = get_double(bin);
            const double im = get_double(bin);
            x = Complex(re, im);
        }
    }
    if (!bin) throw Error(ErrorCode::Io, "truncated " + with_suffix(prefix, ".bin").string());
    return out;
}

// ---------------------------------------------------------------------------
// Staged writes

void FileStager::add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
}

std::vector<fs::path> FileStager::commit() {
    std::error_code ec;
    fs::create_directories(directory_, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + directory_.string() + ": " + ec.message());

    std::vector<fs::path> temps;
    auto cleanup = [&temps] {
        std::error_code ignore;
        for (const auto& t : temps) fs::remove(t, ignore);
    };
    for (const auto& [name, content] : files_) {
        const fs::path tmp = directory_ / ("." + name + ".partial");
        temps.push_back(tmp);
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (out) out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.close();
        if (!out) {
            cleanup();
            throw Error(ErrorCode::Io, "cannot write " + (directory_ / name).string());
        }
    }
    std::vector<fs::path> written;
    for (std::size_t i = 0; i < files_.size(); ++i) {
        const fs::path target = directory_ / files_[i].first;
        fs::rename(temps[i], target, ec);
        if (ec) {
            cleanup();
            throw Error(ErrorCode::Io, "cannot rename into " + target.string() + ": " + ec.message());
        }
        written.push_back(target);
    }
    files_.clear();
    return written;
}

}  // namespace tmadf
