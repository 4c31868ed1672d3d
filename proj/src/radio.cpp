#include "relaysched/radio.hpp"

#include "relaysched/parallel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relaysched::radio {

double distance(Position a, Position b) noexcept
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double PathlossModel::loss_db(double d) const
{
    return pl0_db + 10.0 * exponent * std::log10(std::max(d, min_distance_m));
}

const Transmitter& NodeGeometry::transmitter(TxId id) const
{
    if (id == kDonor)
        return donor;
    if (id - 1 >= relays.size())
        throw std::out_of_range("transmitter id " + std::to_string(id) + " out of range");
    return relays[id - 1];
}

void NodeGeometry::validate() const
{
    if (ues.empty())
        throw std::invalid_argument("geometry needs at least one UE");
    if (!(pathloss.exponent > 0.0) || !(pathloss.min_distance_m > 0.0))
        throw std::invalid_argument("pathloss exponent and minimum distance must be positive");
    auto finite = [](Position p) { return std::isfinite(p.x) && std::isfinite(p.y); };
    if (!finite(donor.pos) || !std::isfinite(donor.power_dbm) || !std::isfinite(noise_dbm))
        throw std::invalid_argument("non-finite donor or noise parameters");
    for (const auto& r : relays)
        if (!finite(r.pos) || !std::isfinite(r.power_dbm))
            throw std::invalid_argument("non-finite relay parameters");
    for (const auto& u : ues)
        if (!finite(u))
            throw std::invalid_argument("non-finite UE position");
}

ActiveSet donor_only(const NodeGeometry& g)
{
    ActiveSet a(g.transmitter_count(), 0);
    a[kDonor] = 1;
    return a;
}

ActiveSet all_active(const NodeGeometry& g)
{
    return ActiveSet(g.transmitter_count(), 1);
}

double dbm_to_mw(double dbm) noexcept
{
    return std::pow(10.0, dbm / 10.0);
}

double mw_to_dbm(double mw) noexcept
{
    return 10.0 * std::log10(mw);
}

double received_power_dbm(const NodeGeometry& g, TxId tx, Position at)
{
    const auto& t = g.transmitter(tx);
    return t.power_dbm - g.pathloss.loss_db(distance(t.pos, at));
}

double sinr_db_at(const NodeGeometry& g, const ActiveSet& active, TxId serving, Position at,
                  std::span<const double> fading)
{
    if (active.size() != g.transmitter_count())
        throw std::invalid_argument("active set does not match the transmitter count");
    if (!fading.empty() && fading.size() != g.transmitter_count())
        throw std::invalid_argument("fading draw does not match the transmitter count");

    auto power_mw = [&](TxId tx) {
        const double p = dbm_to_mw(received_power_dbm(g, tx, at));
        return fading.empty() ? p : p * fading[tx];
    };

    const double signal = power_mw(serving);
    double interference = 0.0;
    for (TxId tx = 0; tx < active.size(); ++tx)
        if (active[tx] && tx != serving)
            interference += power_mw(tx);
    return mw_to_dbm(signal / (dbm_to_mw(g.noise_dbm) + interference));
}

double sinr_db(const NodeGeometry& g, const ActiveSet& active, TxId serving, Receiver rx,
               std::span<const double> fading)
{
    Position at;
    if (rx.kind == ReceiverKind::Ue) {
        if (rx.index >= g.ues.size())
            throw std::out_of_range("UE index out of range");
        at = g.ues[rx.index];
    } else {
        if (rx.index >= g.relays.size())
            throw std::out_of_range("relay index out of range");
        if (active.at(relay_tx(rx.index)))
            throw std::logic_error("half-duplex breach: relay " + std::to_string(rx.index)
                                   + " cannot receive while transmitting");
        at = g.relays[rx.index].pos;
    }
    return sinr_db_at(g, active, serving, at, fading);
}

int CqiMapping::quantize(double sinr) const
{
    const double bin = std::floor((sinr - floor_db) / step_db) + 1.0;
    if (bin <= 0.0)
        return 0;
    if (bin >= 15.0)
        return 15;
    return static_cast<int>(bin);
}

double CqiMapping::efficiency_of(int cqi) const
{
    if (cqi < 0 || cqi > 15)
        throw std::out_of_range("CQI outside 0..15");
    return efficiency[static_cast<std::size_t>(cqi)];
}

double CqiMapping::bin_midpoint(int cqi) const
{
    return floor_db + (cqi - 0.5) * step_db;
}

void CqiMapping::validate() const
{
    if (!(step_db > 0.0) || !std::isfinite(floor_db))
        throw std::invalid_argument("CQI step must be positive and the floor finite");
    for (std::size_t k = 0; k < efficiency.size(); ++k) {
        if (!(efficiency[k] >= 0.0))
            throw std::invalid_argument("CQI efficiencies must be non-negative");
        if (k > 0 && efficiency[k] < efficiency[k - 1])
            throw std::invalid_argument("CQI efficiency table must be non-decreasing");
    }
}

std::string_view to_string(MapScenario s) noexcept
{
    return s == MapScenario::RelaysActive ? "relays_active" : "relays_silent";
}

Position SinrGrid::pixel_centre(int col, int row) const
{
    return {raster.origin.x + (col + 0.5) * raster.cell_m, raster.origin.y + (row + 0.5) * raster.cell_m};
}

SinrGrid render_sinr_map(const NodeGeometry& g, MapScenario scenario, const RasterSpec& raster, unsigned jobs)
{
    if (raster.width <= 0 || raster.height <= 0 || !(raster.cell_m > 0.0))
        throw std::domain_error("raster has zero area");
    g.validate();

    const double x1 = raster.origin.x + raster.width * raster.cell_m;
    const double y1 = raster.origin.y + raster.height * raster.cell_m;
    auto inside = [&](Position p) {
        return p.x >= raster.origin.x && p.x <= x1 && p.y >= raster.origin.y && p.y <= y1;
    };
    if (!inside(g.donor.pos))
        throw std::domain_error("raster does not cover the donor");
    for (const auto& r : g.relays)
        if (!inside(r.pos))
            throw std::domain_error("raster does not cover every relay");
    for (const auto& u : g.ues)
        if (!inside(u))
            throw std::domain_error("raster does not cover every UE");

    const ActiveSet active = scenario == MapScenario::RelaysActive ? all_active(g) : donor_only(g);

    SinrGrid grid;
    grid.raster = raster;
    grid.scenario = scenario;
    grid.values.resize(static_cast<std::size_t>(raster.width) * raster.height);

    parallel_for(static_cast<std::size_t>(raster.height), jobs, [&](std::size_t row) {
        for (int col = 0; col < raster.width; ++col) {
            const Position p = grid.pixel_centre(col, static_cast<int>(row));
            TxId best = kDonor;
            double best_power = received_power_dbm(g, kDonor, p);
            for (TxId tx = 1; tx < active.size(); ++tx) {
                if (!active[tx])
                    continue;
                const double rx = received_power_dbm(g, tx, p);
                if (rx > best_power) {
                    best_power = rx;
                    best = tx;
                }
            }
            grid.values[row * raster.width + col] = sinr_db_at(g, active, best, p);
        }
    });
    return grid;
}

} // namespace relaysched::radio
