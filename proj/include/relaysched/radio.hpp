#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace relaysched::radio {

struct Position {
    double x = 0.0;
    double y = 0.0;
};

double distance(Position a, Position b) noexcept;

/// Log-distance pathloss PL(d) = pl0_db + 10 n log10(d / 1 m), with d clamped
/// to at least `min_distance_m`.
struct PathlossModel {
    double pl0_db = 30.0;
    double exponent = 3.5;
    double min_distance_m = 1.0;

    double loss_db(double d) const;
};

struct Transmitter {
    Position pos;
    double power_dbm = 46.0;
};

/// Transmitter slot: 0 is the donor, 1 + r is relay r.
using TxId = std::size_t;
inline constexpr TxId kDonor = 0;
constexpr TxId relay_tx(std::size_t relay) noexcept { return relay + 1; }

struct NodeGeometry {
    Transmitter donor;
    std::vector<Transmitter> relays;
    std::vector<Position> ues;
    double noise_dbm = -97.0;
    PathlossModel pathloss;

    std::size_t transmitter_count() const noexcept { return 1 + relays.size(); }
    const Transmitter& transmitter(TxId id) const;

    /// Throws std::invalid_argument on an empty UE list or bad pathloss.
    void validate() const;
};

enum class ReceiverKind { Ue, Relay };

struct Receiver {
    ReceiverKind kind;
    std::size_t index;
};

/// One flag per transmitter slot.
using ActiveSet = std::vector<char>;

ActiveSet donor_only(const NodeGeometry& g);
ActiveSet all_active(const NodeGeometry& g);

double dbm_to_mw(double dbm) noexcept;
double mw_to_dbm(double mw) noexcept;

double received_power_dbm(const NodeGeometry& g, TxId tx, Position at);

/// SINR in dB at `rx` served by `serving`. Every other active transmitter
/// interferes. `fading` holds one unit-mean power multiplier per transmitter
/// slot; an empty span means no fading. The serving transmitter need not be
/// active (used for hypothetical CQI measurement). Throws std::logic_error if
/// the receiver is a relay that is itself transmitting.
double sinr_db(const NodeGeometry& g, const ActiveSet& active, TxId serving, Receiver rx,
               std::span<const double> fading = {});

/// Same computation for an arbitrary point.
double sinr_db_at(const NodeGeometry& g, const ActiveSet& active, TxId serving, Position at,
                  std::span<const double> fading = {});

/// Linear SINR quantiser plus the efficiency table for each CQI.
struct CqiMapping {
    double floor_db = -6.0;
    double step_db = 2.0;
    /// Bits per resource element for CQI 0..15 (36.213 4-bit CQI table).
    std::array<double, 16> efficiency = {0.0,    0.1523, 0.2344, 0.3770, 0.6016, 0.8770,
                                         1.1758, 1.4766, 1.9141, 2.4063, 2.7305, 3.3223,
                                         3.9023, 4.5234, 5.1152, 5.5547};

    int quantize(double sinr_db) const;
    double efficiency_of(int cqi) const;
    /// Centre of the SINR bin that maps to `cqi` (1..15).
    double bin_midpoint(int cqi) const;

    void validate() const;
};

enum class MapScenario { RelaysActive, RelaysSilent };

std::string_view to_string(MapScenario s) noexcept;

struct RasterSpec {
    Position origin;
    double cell_m = 10.0;
    int width = 0;
    int height = 0;
};

/// Mean SINR raster sampled at pixel centres, row-major with row 0 at origin.y.
struct SinrGrid {
    RasterSpec raster;
    MapScenario scenario = MapScenario::RelaysSilent;
    std::vector<double> values;

    double at(int col, int row) const { return values[static_cast<std::size_t>(row) * raster.width + col]; }
    Position pixel_centre(int col, int row) const;
};

/// Best server by mean received power among the donor and, when relays are
/// active, every relay; all other active transmitters interfere. No fading.
SinrGrid render_sinr_map(const NodeGeometry& g, MapScenario scenario, const RasterSpec& raster,
                         unsigned jobs = 1);

} // namespace relaysched::radio
