#include "relaysched/io/config.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace relaysched::io {

using nlohmann::json;

namespace {

// Input iterator that publishes how far the parser has read.
class TrackingIterator {
public:
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    TrackingIterator() = default;
    TrackingIterator(const char* p, const char* begin, std::size_t* offset) : p_(p), begin_(begin), offset_(offset) {}

    reference operator*() const
    {
        *offset_ = static_cast<std::size_t>(p_ - begin_);
        return *p_;
    }
    TrackingIterator& operator++()
    {
        ++p_;
        return *this;
    }
    TrackingIterator operator++(int)
    {
        auto copy = *this;
        ++p_;
        return copy;
    }
    friend bool operator==(const TrackingIterator& a, const TrackingIterator& b) { return a.p_ == b.p_; }

private:
    const char* p_ = nullptr;
    const char* begin_ = nullptr;
    std::size_t* offset_ = nullptr;
};

// Records the source line of every value by JSON pointer.
class LineRecorder : public nlohmann::json_sax<json> {
public:
    LineRecorder(const std::string& text, const std::size_t& offset, std::unordered_map<std::string, int>& lines)
        : text_(text), offset_(offset), lines_(lines)
    {
    }

    bool null() override { return value(); }
    bool boolean(bool) override { return value(); }
    bool number_integer(number_integer_t) override { return value(); }
    bool number_unsigned(number_unsigned_t) override { return value(); }
    bool number_float(number_float_t, const string_t&) override { return value(); }
    bool string(string_t&) override { return value(); }
    bool binary(binary_t&) override { return value(); }

    bool start_object(std::size_t) override
    {
        const auto path = current_path();
        record(path);
        frames_.push_back({false, 0, {}, path});
        return true;
    }
    bool key(string_t& k) override
    {
        frames_.back().key = k;
        return true;
    }
    bool end_object() override
    {
        frames_.pop_back();
        advance();
        return true;
    }
    bool start_array(std::size_t) override
    {
        const auto path = current_path();
        record(path);
        frames_.push_back({true, 0, {}, path});
        return true;
    }
    bool end_array() override
    {
        frames_.pop_back();
        advance();
        return true;
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

private:
    struct Frame {
        bool array;
        std::size_t index;
        std::string key;
        std::string path;
    };

    static std::string escape(const std::string& token)
    {
        std::string out;
        for (char c : token) {
            if (c == '~')
                out += "~0";
            else if (c == '/')
                out += "~1";
            else
                out += c;
        }
        return out;
    }

    std::string current_path() const
    {
        if (frames_.empty())
            return "";
        const auto& f = frames_.back();
        return f.path + "/" + (f.array ? std::to_string(f.index) : escape(f.key));
    }

    void record(const std::string& path)
    {
        const auto end = std::min(offset_, text_.size());
        lines_[path] = 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(end), '\n'));
    }

    void advance()
    {
        if (!frames_.empty() && frames_.back().array)
            ++frames_.back().index;
    }

    bool value()
    {
        record(current_path());
        advance();
        return true;
    }

    const std::string& text_;
    const std::size_t& offset_;
    std::unordered_map<std::string, int>& lines_;
    std::vector<Frame> frames_;
};

// Typed access to one JSON object; rejects keys nobody asked for.
class Reader {
public:
    Reader(const ConfigDocument& doc, const json& node, std::string pointer)
        : doc_(doc), node_(node), pointer_(std::move(pointer))
    {
        if (!node_.is_object())
            fail("expected an object");
    }

    [[noreturn]] void fail(const std::string& message, const std::string& key = {}) const
    {
        const std::string where = key.empty() ? pointer_ : pointer_ + "/" + key;
        const int line = doc_.line_of(where);
        std::ostringstream os;
        os << doc_.source_name;
        if (line > 0)
            os << ":" << line;
        os << ": " << message << " (at " << (where.empty() ? "/" : where) << ")";
        throw ConfigError(os.str(), line);
    }

    bool has(const std::string& key) const { return node_.contains(key); }

    const json& get(const std::string& key)
    {
        seen_.insert(key);
        if (!node_.contains(key))
            fail("missing required key '" + key + "'");
        return node_.at(key);
    }

    double number(const std::string& key)
    {
        const auto& v = get(key);
        if (!v.is_number())
            fail("expected a number", key);
        const double d = v.get<double>();
        if (!std::isfinite(d))
            fail("expected a finite number", key);
        return d;
    }

    double number(const std::string& key, double fallback) { return has(key) ? number(key) : mark(key, fallback); }

    long long integer(const std::string& key)
    {
        const auto& v = get(key);
        if (!v.is_number_integer())
            fail("expected an integer", key);
        return v.get<long long>();
    }

    long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : mark(key, fallback); }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback)
    {
        if (!has(key))
            return mark(key, fallback);
        const auto& v = get(key);
        if (!v.is_number_unsigned())
            fail("expected a non-negative integer", key);
        return v.get<std::uint64_t>();
    }

    std::string string(const std::string& key)
    {
        const auto& v = get(key);
        if (!v.is_string())
            fail("expected a string", key);
        return v.get<std::string>();
    }

    std::string string(const std::string& key, const std::string& fallback)
    {
        return has(key) ? string(key) : mark(key, fallback);
    }

    Reader object(const std::string& key)
    {
        const auto& v = get(key);
        if (!v.is_object())
            fail("expected an object", key);
        return Reader(doc_, v, pointer_ + "/" + key);
    }

    const json& array(const std::string& key)
    {
        const auto& v = get(key);
        if (!v.is_array())
            fail("expected an array", key);
        return v;
    }

    Reader element(const std::string& key, std::size_t index) const
    {
        const auto& v = node_.at(key).at(index);
        const std::string path = pointer_ + "/" + key + "/" + std::to_string(index);
        if (!v.is_object())
            Reader(doc_, json::object(), path).fail("expected an object");
        return Reader(doc_, v, path);
    }

    /// Wraps a domain validation so its message carries this location.
    template <typename Fn>
    auto check(const std::string& key, Fn&& fn)
    {
        try {
            return fn();
        } catch (const std::invalid_argument& e) {
            fail(e.what(), key);
        } catch (const std::domain_error& e) {
            fail(e.what(), key);
        }
    }

    void finish() const
    {
        for (auto it = node_.begin(); it != node_.end(); ++it)
            if (!seen_.count(it.key()) && it.key() != "description")
                fail("unknown key '" + it.key() + "'", it.key());
    }

    const std::string& pointer() const { return pointer_; }

private:
    template <typename T>
    T mark(const std::string& key, T value)
    {
        seen_.insert(key);
        return value;
    }

    const ConfigDocument& doc_;
    const json& node_;
    std::string pointer_;
    std::set<std::string> seen_;
};

FlowSpec read_flow(Reader r, int default_id, double beta)
{
    const auto id = static_cast<int>(r.integer("id", default_id));
    const auto cls = r.string("class");
    const double lambda_r = r.number("lambda_r");
    if (!(lambda_r > 0.0))
        r.fail("lambda_r must be positive", "lambda_r");
    FlowSpec f;
    if (cls == "direct") {
        std::optional<double> lambda_a;
        if (r.has("lambda_a")) {
            lambda_a = r.number("lambda_a");
            if (!(*lambda_a > 0.0))
                r.fail("lambda_a must be positive", "lambda_a");
        }
        f = FlowSpec::direct(id, lambda_r, lambda_a);
    } else if (cls == "relayed") {
        if (r.has("lambda_a"))
            r.fail("relayed flows have no access-phase rate", "lambda_a");
        f = FlowSpec::relayed(id, lambda_r, beta);
    } else {
        r.fail("class must be 'direct' or 'relayed'", "class");
    }
    r.finish();
    return f;
}

ModelConfig read_model(Reader& root)
{
    ModelConfig m;
    m.beta = root.number("beta", 1.0);
    if (m.beta < 1.0)
        root.fail("beta must be >= 1", "beta");

    if (root.has("phase")) {
        auto p = root.object("phase");
        if (p.has("alpha")) {
            if (p.has("tau_r") || p.has("tau_a"))
                p.fail("give either alpha or tau_r/tau_a, not both");
            const double alpha = p.number("alpha");
            m.phase = p.check("alpha", [&] { return RelayPhaseConfig::from_alpha(alpha, m.beta); });
        } else {
            const auto tau_r = static_cast<int>(p.integer("tau_r"));
            const auto tau_a = static_cast<int>(p.integer("tau_a"));
            m.phase = p.check("tau_r", [&] { return RelayPhaseConfig::from_subframes(tau_r, tau_a, m.beta); });
        }
        p.finish();
    }

    const auto& flows = root.array("flows");
    if (flows.empty())
        root.fail("at least one flow is required", "flows");
    for (std::size_t k = 0; k < flows.size(); ++k)
        m.flows.push_back(read_flow(root.element("flows", k), static_cast<int>(k), m.beta));
    root.check("flows", [&] { validate_flows(m.flows); });
    std::set<int> ids;
    for (const auto& f : m.flows)
        if (!ids.insert(f.id).second)
            root.fail("duplicate flow id " + std::to_string(f.id), "flows");
    const bool any_relayed = std::any_of(m.flows.begin(), m.flows.end(), [](const FlowSpec& f) { return !f.is_direct(); });
    if (any_relayed && !m.phase)
        root.fail("relayed flows need a 'phase' section", "flows");

    if (root.has("solver")) {
        auto s = root.object("solver");
        m.solver.tolerance = s.number("tolerance", m.solver.tolerance);
        m.solver.max_iter = static_cast<int>(s.integer("max_iter", m.solver.max_iter));
        m.solver.damping = s.number("damping", m.solver.damping);
        m.solver.inclusion_exclusion_cap =
            static_cast<std::size_t>(s.integer("inclusion_exclusion_cap", static_cast<long long>(m.solver.inclusion_exclusion_cap)));
        if (!(m.solver.tolerance > 0.0))
            s.fail("tolerance must be positive", "tolerance");
        if (m.solver.max_iter < 0)
            s.fail("max_iter must be non-negative", "max_iter");
        if (!(m.solver.damping > 0.0 && m.solver.damping <= 1.0))
            s.fail("damping must lie in (0, 1]", "damping");
        if (m.solver.inclusion_exclusion_cap < 1 || m.solver.inclusion_exclusion_cap > analytic::kInclusionExclusionCap)
            s.fail("inclusion_exclusion_cap must lie in [1, 20]", "inclusion_exclusion_cap");
        s.finish();
    }
    return m;
}

radio::Position read_position(Reader& r)
{
    const double x = r.number("x");
    const double y = r.number("y");
    return {x, y};
}

sim::Traffic read_traffic(Reader r)
{
    const auto kind = r.string("kind");
    sim::Traffic t;
    if (kind == "full_buffer") {
        t = sim::Traffic::full_buffer();
    } else if (kind == "cbr") {
        const auto bytes = r.integer("bytes_per_tti");
        if (bytes < 0)
            r.fail("bytes_per_tti must be non-negative", "bytes_per_tti");
        t = sim::Traffic::cbr(bytes);
    } else {
        r.fail("traffic kind must be 'full_buffer' or 'cbr'", "kind");
    }
    r.finish();
    return t;
}

struct GeometryWithUes {
    radio::NodeGeometry geometry;
    std::vector<std::optional<std::size_t>> ue_relay;
    std::vector<std::optional<sim::Traffic>> ue_traffic;
};

GeometryWithUes read_geometry(Reader g)
{
    GeometryWithUes out;
    auto& geo = out.geometry;
    {
        auto d = g.object("donor");
        geo.donor.pos = read_position(d);
        geo.donor.power_dbm = d.number("power_dbm", 46.0);
        d.finish();
    }
    if (g.has("relays")) {
        const auto& relays = g.array("relays");
        for (std::size_t k = 0; k < relays.size(); ++k) {
            auto r = g.element("relays", k);
            radio::Transmitter t;
            t.pos = read_position(r);
            t.power_dbm = r.number("power_dbm", 30.0);
            r.finish();
            geo.relays.push_back(t);
        }
    }
    const auto& ues = g.array("ues");
    if (ues.empty())
        g.fail("at least one UE is required", "ues");
    for (std::size_t k = 0; k < ues.size(); ++k) {
        auto u = g.element("ues", k);
        geo.ues.push_back(read_position(u));
        std::optional<std::size_t> relay;
        if (u.has("relay")) {
            const auto r = u.integer("relay");
            if (r < 0 || static_cast<std::size_t>(r) >= geo.relays.size())
                u.fail("UE is attached to unknown relay " + std::to_string(r), "relay");
            relay = static_cast<std::size_t>(r);
        }
        out.ue_relay.push_back(relay);
        out.ue_traffic.push_back(u.has("traffic") ? std::optional(read_traffic(u.object("traffic"))) : std::nullopt);
        u.finish();
    }
    geo.noise_dbm = g.number("noise_dbm", geo.noise_dbm);
    if (g.has("pathloss")) {
        auto p = g.object("pathloss");
        geo.pathloss.pl0_db = p.number("pl0_db", geo.pathloss.pl0_db);
        geo.pathloss.exponent = p.number("exponent", geo.pathloss.exponent);
        geo.pathloss.min_distance_m = p.number("min_distance_m", geo.pathloss.min_distance_m);
        p.finish();
    }
    g.check("pathloss", [&] { geo.validate(); });
    g.finish();
    return out;
}

sim::SubframePlan read_plan(Reader& r, const std::string& key)
{
    const auto text = r.string(key);
    return r.check(key, [&] { return sim::SubframePlan::parse(text); });
}

sim::ScenarioConfig read_scenario(Reader& root, bool plan_required)
{
    sim::ScenarioConfig s;
    auto geo = read_geometry(root.object("geometry"));
    s.geometry = std::move(geo.geometry);
    s.ue_relay = std::move(geo.ue_relay);

    if (root.has("plan") && root.has("partition"))
        root.fail("give either 'plan' or 'partition', not both");
    if (root.has("plan")) {
        s.plan = read_plan(root, "plan");
    } else if (root.has("partition")) {
        const auto text = root.string("partition");
        s.plan = root.check("partition", [&] { return sim::SubframePlan::fdd_partition(text); });
    } else if (plan_required) {
        root.fail("missing required key 'plan'");
    }

    sim::Traffic direct_default;
    sim::Traffic relayed_default;
    if (root.has("traffic")) {
        auto t = root.object("traffic");
        if (t.has("direct"))
            direct_default = read_traffic(t.object("direct"));
        if (t.has("relayed"))
            relayed_default = read_traffic(t.object("relayed"));
        t.finish();
    }
    for (std::size_t u = 0; u < s.geometry.ues.size(); ++u)
        s.traffic.push_back(geo.ue_traffic[u].value_or(s.ue_relay[u] ? relayed_default : direct_default));

    if (root.has("scheduler")) {
        auto sc = root.object("scheduler");
        const auto donor = sc.string("donor", "pf");
        const auto relay = sc.string("relay", "pf");
        s.donor_policy = sc.check("donor", [&] { return sim::parse_scheduler_policy(donor); });
        s.relay_policy = sc.check("relay", [&] { return sim::parse_scheduler_policy(relay); });
        const auto alloc = sc.string("allocation", "whole_subframe");
        if (alloc == "whole_subframe")
            s.allocation = sim::RbAllocation::WholeSubframe;
        else if (alloc == "round_robin_split")
            s.allocation = sim::RbAllocation::RoundRobinSplit;
        else
            sc.fail("allocation must be 'whole_subframe' or 'round_robin_split'", "allocation");
        s.backhaul_incentive = sc.number("backhaul_incentive", s.backhaul_incentive);
        s.scheduler_epsilon = sc.number("epsilon", s.scheduler_epsilon);
        sc.finish();
    }

    s.rb_count = static_cast<int>(root.integer("rb_count", s.rb_count));
    s.symbols_per_rb = static_cast<int>(root.integer("symbols_per_rb", s.symbols_per_rb));
    s.ttis = root.integer("ttis", s.ttis);
    s.seed = root.unsigned_integer("seed", s.seed);
    s.buffer_capacity_bytes = root.integer("buffer_capacity_bytes", s.buffer_capacity_bytes);

    if (root.has("cqi")) {
        auto c = root.object("cqi");
        s.cqi.floor_db = c.number("floor_db", s.cqi.floor_db);
        s.cqi.step_db = c.number("step_db", s.cqi.step_db);
        if (c.has("efficiency")) {
            const auto& table = c.array("efficiency");
            if (table.size() != 16)
                c.fail("efficiency table needs 16 entries", "efficiency");
            for (std::size_t k = 0; k < 16; ++k) {
                if (!table[k].is_number())
                    c.fail("efficiency entries must be numbers", "efficiency");
                s.cqi.efficiency[k] = table[k].get<double>();
            }
        }
        c.finish();
    }
    root.check("geometry", [&] { s.validate(); });
    return s;
}

json plan_json(const sim::SubframePlan& p)
{
    return p.to_string();
}

json traffic_json(const sim::Traffic& t)
{
    if (t.kind == sim::Traffic::Kind::FullBuffer)
        return {{"kind", "full_buffer"}};
    return {{"kind", "cbr"}, {"bytes_per_tti", t.bytes_per_tti}};
}

json geometry_json(const radio::NodeGeometry& g, const std::vector<std::optional<std::size_t>>* relay,
                   const std::vector<sim::Traffic>* traffic)
{
    json out;
    out["donor"] = {{"x", g.donor.pos.x}, {"y", g.donor.pos.y}, {"power_dbm", g.donor.power_dbm}};
    out["relays"] = json::array();
    for (const auto& r : g.relays)
        out["relays"].push_back({{"x", r.pos.x}, {"y", r.pos.y}, {"power_dbm", r.power_dbm}});
    out["ues"] = json::array();
    for (std::size_t u = 0; u < g.ues.size(); ++u) {
        json ue = {{"x", g.ues[u].x}, {"y", g.ues[u].y}};
        if (relay && (*relay)[u])
            ue["relay"] = *(*relay)[u];
        if (traffic)
            ue["traffic"] = traffic_json((*traffic)[u]);
        out["ues"].push_back(ue);
    }
    out["noise_dbm"] = g.noise_dbm;
    out["pathloss"] = {{"pl0_db", g.pathloss.pl0_db},
                       {"exponent", g.pathloss.exponent},
                       {"min_distance_m", g.pathloss.min_distance_m}};
    return out;
}

json scenario_json(const sim::ScenarioConfig& s)
{
    json out;
    out["geometry"] = geometry_json(s.geometry, &s.ue_relay, &s.traffic);
    out["plan"] = plan_json(s.plan);
    out["scheduler"] = {{"donor", sim::to_string(s.donor_policy)},
                        {"relay", sim::to_string(s.relay_policy)},
                        {"allocation", s.allocation == sim::RbAllocation::WholeSubframe ? "whole_subframe"
                                                                                         : "round_robin_split"},
                        {"backhaul_incentive", s.backhaul_incentive},
                        {"epsilon", s.scheduler_epsilon}};
    out["rb_count"] = s.rb_count;
    out["symbols_per_rb"] = s.symbols_per_rb;
    out["ttis"] = s.ttis;
    out["seed"] = s.seed;
    out["buffer_capacity_bytes"] = s.buffer_capacity_bytes;
    out["cqi"] = {{"floor_db", s.cqi.floor_db},
                  {"step_db", s.cqi.step_db},
                  {"efficiency", std::vector<double>(s.cqi.efficiency.begin(), s.cqi.efficiency.end())}};
    return out;
}

json model_json(const ModelConfig& m)
{
    json out;
    out["flows"] = json::array();
    for (const auto& f : m.flows) {
        json fj = {{"id", f.id}, {"class", to_string(f.cls)}, {"lambda_r", f.lambda_r}};
        if (f.lambda_a)
            fj["lambda_a"] = *f.lambda_a;
        out["flows"].push_back(fj);
    }
    if (m.phase) {
        if (m.phase->has_frame_timing())
            out["phase"] = {{"tau_r", m.phase->tau_r()}, {"tau_a", m.phase->tau_a()}};
        else
            out["phase"] = {{"alpha", m.phase->alpha()}};
    }
    out["beta"] = m.beta;
    out["solver"] = {{"tolerance", m.solver.tolerance},
                     {"max_iter", m.solver.max_iter},
                     {"damping", m.solver.damping},
                     {"inclusion_exclusion_cap", m.solver.inclusion_exclusion_cap}};
    return out;
}

} // namespace

ConfigError::ConfigError(const std::string& message, int line) : std::runtime_error(message), line_(line) {}

int ConfigDocument::line_of(const std::string& pointer) const
{
    // Fall back to the closest enclosing value that has a recorded line.
    std::string p = pointer;
    for (;;) {
        if (auto it = lines.find(p); it != lines.end())
            return it->second;
        const auto slash = p.rfind('/');
        if (slash == std::string::npos)
            return 0;
        p.resize(slash);
    }
}

ConfigDocument parse_config(const std::string& text, const std::string& source_name)
{
    ConfigDocument doc;
    doc.source_name = source_name;
    try {
        doc.root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(end), '\n'));
        const auto line_start = text.rfind('\n', end == 0 ? 0 : end - 1);
        const auto column = end - (line_start == std::string::npos ? 0 : line_start + 1) + 1;
        std::string what = e.what();
        if (const auto colon = what.find(": "); colon != std::string::npos)
            what = what.substr(colon + 2);
        throw ConfigError(source_name + ":" + std::to_string(line) + ":" + std::to_string(column)
                              + ": malformed JSON: " + what,
                          line);
    }
    if (!doc.root.is_object())
        throw ConfigError(source_name + ":1: configuration must be a JSON object", 1);

    std::size_t offset = 0;
    LineRecorder recorder(text, offset, doc.lines);
    const char* begin = text.data();
    json::sax_parse(TrackingIterator(begin, begin, &offset), TrackingIterator(begin + text.size(), begin, &offset),
                    &recorder);
    return doc;
}

ConfigDocument load_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open configuration file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::vector<double> spaced_values(double from, double to, int points, bool logarithmic)
{
    if (points < 2)
        throw std::invalid_argument("a spaced range needs at least two points");
    if (!(to > from))
        throw std::invalid_argument("range end must exceed its start");
    if (logarithmic && !(from > 0.0))
        throw std::invalid_argument("logarithmic ranges need a positive start");
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double s = static_cast<double>(k) / (points - 1);
        v[static_cast<std::size_t>(k)] = logarithmic ? std::exp(std::log(from) + s * (std::log(to) - std::log(from)))
                                                     : from + s * (to - from);
    }
    v.front() = from;
    v.back() = to;
    return v;
}

SolveJob load_solve_job(const ConfigDocument& doc)
{
    Reader root(doc, doc.root, "");
    SolveJob job{read_model(root)};
    root.finish();
    return job;
}

SweepJob load_sweep_job(const ConfigDocument& doc)
{
    Reader root(doc, doc.root, "");
    SweepJob job;
    job.model = read_model(root);
    if (!job.model.phase)
        root.fail("sweeps need a 'phase' section", "phase");
    auto s = root.object("sweep");
    const auto name = s.string("parameter");
    job.sweep.parameter = s.check("parameter", [&] { return analytic::parse_sweep_parameter(name); });
    if (s.has("values")) {
        const auto& values = s.array("values");
        for (const auto& v : values) {
            if (!v.is_number())
                s.fail("sweep values must be numbers", "values");
            job.sweep.values.push_back(v.get<double>());
        }
        if (job.sweep.values.empty())
            s.fail("sweep values are empty", "values");
    } else {
        const double from = s.number("from");
        const double to = s.number("to");
        const auto points = static_cast<int>(s.integer("points"));
        const auto spacing = s.string("spacing", "linear");
        if (spacing != "linear" && spacing != "log")
            s.fail("spacing must be 'linear' or 'log'", "spacing");
        job.sweep.values = s.check("from", [&] { return spaced_values(from, to, points, spacing == "log"); });
    }
    for (std::size_t k = 1; k < job.sweep.values.size(); ++k)
        if (!(job.sweep.values[k] > job.sweep.values[k - 1]))
            s.fail("sweep values must be strictly increasing", "values");
    s.finish();
    root.finish();
    return job;
}

McJob load_mc_job(const ConfigDocument& doc)
{
    Reader root(doc, doc.root, "");
    McJob job;
    job.model = read_model(root);
    if (job.model.phase && !job.model.phase->has_frame_timing())
        root.fail("Monte-Carlo runs need tau_r/tau_a rather than alpha", "phase");
    if (root.has("mc")) {
        auto m = root.object("mc");
        job.mc.slots = m.integer("slots", job.mc.slots);
        job.mc.epsilon = m.number("epsilon", job.mc.epsilon);
        job.mc.seed = m.unsigned_integer("seed", job.mc.seed);
        const auto policy = m.string("policy", std::string(mc::to_string(job.mc.policy)));
        job.mc.policy = m.check("policy", [&] { return mc::parse_policy(policy); });
        job.mc.trace_every = m.integer("trace_every", job.mc.trace_every);
        if (job.mc.slots <= 0)
            m.fail("slots must be positive", "slots");
        if (!(job.mc.epsilon > 0.0 && job.mc.epsilon < 1.0))
            m.fail("epsilon must lie in (0, 1)", "epsilon");
        if (job.mc.trace_every < 0)
            m.fail("trace_every must be non-negative", "trace_every");
        m.finish();
    }
    root.finish();
    return job;
}

SimJob load_sim_job(const ConfigDocument& doc)
{
    Reader root(doc, doc.root, "");
    SimJob job;
    job.scenario = read_scenario(root, true);
    job.balance_tolerance = root.number("balance_tolerance", job.balance_tolerance);
    if (root.has("compare"))
        root.object("compare");
    root.finish();
    return job;
}

CompareJob load_compare_job(const ConfigDocument& doc)
{
    Reader root(doc, doc.root, "");
    CompareJob job;
    job.scenario = read_scenario(root, false);
    root.number("balance_tolerance", 0.05);
    auto c = root.object("compare");
    job.plan_a = read_plan(c, "plan_a");
    job.plan_b = read_plan(c, "plan_b");
    job.tie_tolerance = c.number("tie_tolerance", job.tie_tolerance);
    if (job.plan_a.period() != job.plan_b.period())
        c.fail("plans of different periods cannot be compared", "plan_b");
    if (!(job.tie_tolerance >= 0.0))
        c.fail("tie_tolerance must be non-negative", "tie_tolerance");
    c.finish();
    root.finish();
    job.scenario.plan = job.plan_a;
    return job;
}

MapJob load_map_job(const ConfigDocument& doc)
{
    Reader root(doc, doc.root, "");
    MapJob job;
    job.geometry = read_geometry(root.object("geometry")).geometry;
    auto r = root.object("raster");
    job.raster.origin.x = r.number("origin_x");
    job.raster.origin.y = r.number("origin_y");
    job.raster.cell_m = r.number("cell_m");
    job.raster.width = static_cast<int>(r.integer("width"));
    job.raster.height = static_cast<int>(r.integer("height"));
    if (job.raster.width <= 0 || job.raster.height <= 0 || !(job.raster.cell_m > 0.0))
        r.fail("raster has zero area");
    r.finish();
    root.finish();
    return job;
}

json to_json(const SolveJob& job)
{
    return model_json(job.model);
}

json to_json(const SweepJob& job)
{
    json out = model_json(job.model);
    out["sweep"] = {{"parameter", analytic::to_string(job.sweep.parameter)}, {"values", job.sweep.values}};
    return out;
}

json to_json(const McJob& job)
{
    json out = model_json(job.model);
    out["mc"] = {{"slots", job.mc.slots},
                 {"epsilon", job.mc.epsilon},
                 {"seed", job.mc.seed},
                 {"policy", mc::to_string(job.mc.policy)},
                 {"trace_every", job.mc.trace_every}};
    return out;
}

json to_json(const SimJob& job)
{
    json out = scenario_json(job.scenario);
    out["balance_tolerance"] = job.balance_tolerance;
    return out;
}

json to_json(const CompareJob& job)
{
    json out = scenario_json(job.scenario);
    out.erase("plan");
    out["compare"] = {{"plan_a", plan_json(job.plan_a)},
                      {"plan_b", plan_json(job.plan_b)},
                      {"tie_tolerance", job.tie_tolerance}};
    return out;
}

json to_json(const MapJob& job)
{
    json out;
    out["geometry"] = geometry_json(job.geometry, nullptr, nullptr);
    out["raster"] = {{"origin_x", job.raster.origin.x},
                     {"origin_y", job.raster.origin.y},
                     {"cell_m", job.raster.cell_m},
                     {"width", job.raster.width},
                     {"height", job.raster.height}};
    return out;
}

} // namespace relaysched::io
