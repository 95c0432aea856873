#pragma once

#include <functional>
#include <iosfwd>
#include <map>

#include "mqw/detection.hpp"

// Parameter-sweep plumbing shared by the CLI subcommands: grid evaluation
// over a worker pool, the result table, and its CSV form. Cells are written
// by index, so output is identical for any worker count.

namespace mqw {

inline constexpr const char* kVersion = "0.1.0";

struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

enum class Observable { MeanN, PDet, DeltaPDet, MaxAbsEigenvalue, SurvivalSN, DistinctCount };
enum class EngineKind { Exact, ClosedForm, MonteCarlo, Spectral };

Observable observableFromName(const std::string& name);
EngineKind engineFromName(const std::string& name);
std::string engineName(EngineKind e);
bool observableSupportsEngine(Observable o, EngineKind e);

struct Cell {
    enum class Status { Ok, Undefined, Failed };
    Status status = Status::Ok;
    double value = 0.0;
    std::optional<double> stderrValue;
    std::string engineTag;
    std::vector<double> extras;

    static Cell ok(double v) { return Cell{Status::Ok, v, std::nullopt, {}, {}}; }
    static Cell undefined() { return Cell{Status::Undefined, 0.0, std::nullopt, {}, {}}; }
    static Cell failed(std::string why) {
        return Cell{Status::Failed, 0.0, std::nullopt, std::move(why), {}};
    }
};

struct ResultTable {
    std::vector<std::pair<std::string, std::string>> header;  // key/value lines
    AxisSpec axis1, axis2;
    std::vector<Cell> cells;  // axis1-major, axis1.steps * axis2.steps entries
    bool hasStderr = false;
    bool hasEngineTag = false;
    std::vector<std::string> extraColumns;

    const Cell& at(int i, int j) const {
        return cells[static_cast<size_t>(i) * axis2.steps + j];
    }
    bool anyFailed() const;
    void writeCsv(std::ostream& os) const;
};

// Evaluates eval(axis1 value, axis2 value) over the full grid; exceptions
// become Failed cells carrying the message as their tag.
ResultTable runGrid(const AxisSpec& axis1, const AxisSpec& axis2, int threads,
                    const std::function<Cell(double, double)>& eval);

// Axis parser for the CLI's --grid NAME:MIN:MAX:STEPS flags.
AxisSpec parseAxisSpec(const std::string& text);

}  // namespace mqw
