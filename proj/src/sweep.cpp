#include "mqw/sweep.hpp"

#include <atomic>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace mqw {

Observable observableFromName(const std::string& name) {
    if (name == "meanN") return Observable::MeanN;
    if (name == "pDet") return Observable::PDet;
    if (name == "deltaPDet") return Observable::DeltaPDet;
    if (name == "maxAbsEigenvalue") return Observable::MaxAbsEigenvalue;
    if (name == "survivalSN") return Observable::SurvivalSN;
    if (name == "distinctCount") return Observable::DistinctCount;
    throw SpecError("unknown observable: " + name);
}

EngineKind engineFromName(const std::string& name) {
    if (name == "exact") return EngineKind::Exact;
    if (name == "closedform") return EngineKind::ClosedForm;
    if (name == "montecarlo") return EngineKind::MonteCarlo;
    if (name == "spectral") return EngineKind::Spectral;
    throw SpecError("unknown engine: " + name);
}

std::string engineName(EngineKind e) {
    switch (e) {
        case EngineKind::Exact: return "exact";
        case EngineKind::ClosedForm: return "closedform";
        case EngineKind::MonteCarlo: return "montecarlo";
        case EngineKind::Spectral: return "spectral";
    }
    return "?";
}

bool observableSupportsEngine(Observable o, EngineKind e) {
    switch (o) {
        case Observable::MeanN:
        case Observable::PDet:
            return e == EngineKind::Exact || e == EngineKind::ClosedForm ||
                   e == EngineKind::MonteCarlo;
        case Observable::DeltaPDet:
            return e == EngineKind::Exact || e == EngineKind::MonteCarlo;
        case Observable::MaxAbsEigenvalue:
            return e == EngineKind::Spectral;
        case Observable::SurvivalSN:
            return e == EngineKind::Exact || e == EngineKind::Spectral;
        case Observable::DistinctCount:
            return e == EngineKind::Exact;
    }
    return false;
}

bool ResultTable::anyFailed() const {
    for (const Cell& c : cells)
        if (c.status == Cell::Status::Failed) return true;
    return false;
}

namespace {

std::string formatValue(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

void ResultTable::writeCsv(std::ostream& os) const {
    for (const auto& [key, value] : header) os << "# " << key << " = " << value << "\n";
    os << axis1.name << "," << axis2.name << ",value";
    if (hasStderr) os << ",stderr";
    for (const std::string& c : extraColumns) os << "," << c;
    if (hasEngineTag) os << ",engine";
    os << "\n";

    const auto v1 = axis1.values();
    const auto v2 = axis2.values();
    for (int i = 0; i < axis1.steps; ++i) {
        for (int j = 0; j < axis2.steps; ++j) {
            const Cell& c = at(i, j);
            os << formatValue(v1[static_cast<size_t>(i)]) << ","
               << formatValue(v2[static_cast<size_t>(j)]) << ",";
            switch (c.status) {
                case Cell::Status::Ok: os << formatValue(c.value); break;
                case Cell::Status::Undefined: os << "undefined"; break;
                case Cell::Status::Failed: os << "failed"; break;
            }
            if (hasStderr)
                os << "," << (c.stderrValue ? formatValue(*c.stderrValue) : std::string("-"));
            for (size_t k = 0; k < extraColumns.size(); ++k)
                os << "," << (k < c.extras.size() ? formatValue(c.extras[k]) : std::string("-"));
            if (hasEngineTag) os << "," << (c.engineTag.empty() ? "-" : c.engineTag);
            os << "\n";
        }
    }
}

ResultTable runGrid(const AxisSpec& axis1, const AxisSpec& axis2, int threads,
                    const std::function<Cell(double, double)>& eval) {
    ResultTable table;
    table.axis1 = axis1;
    table.axis2 = axis2;
    const int total = axis1.steps * axis2.steps;
    table.cells.resize(static_cast<size_t>(total));
    const auto v1 = axis1.values();
    const auto v2 = axis2.values();

    auto work = [&](int idx) {
        const int i = idx / axis2.steps;
        const int j = idx % axis2.steps;
        Cell cell;
        try {
            cell = eval(v1[static_cast<size_t>(i)], v2[static_cast<size_t>(j)]);
        } catch (const std::exception& e) {
            cell = Cell::failed(e.what());
        }
        table.cells[static_cast<size_t>(idx)] = std::move(cell);
    };

    threads = std::max(1, std::min(threads, total));
    if (threads == 1) {
        for (int idx = 0; idx < total; ++idx) work(idx);
    } else {
        std::atomic<int> counter{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int idx = counter.fetch_add(1); idx < total; idx = counter.fetch_add(1))
                    work(idx);
            });
        for (std::thread& t : pool) t.join();
    }
    return table;
}

AxisSpec parseAxisSpec(const std::string& text) {
    AxisSpec axis;
    std::istringstream in(text);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(in, field, ':')) fields.push_back(field);
    if (fields.size() != 4) throw SpecError("--grid expects NAME:MIN:MAX:STEPS, got " + text);
    axis.name = fields[0];
    if (axis.name != "gtau" && axis.name != "alpha" && axis.name != "phi" &&
        axis.name != "N")
        throw SpecError("grid axis must be one of gtau|alpha|phi|N, got " + axis.name);
    try {
        axis.min = std::stod(fields[1]);
        axis.max = std::stod(fields[2]);
        axis.steps = std::stoi(fields[3]);
    } catch (const std::exception&) {
        throw SpecError("could not parse numeric grid fields in " + text);
    }
    if (axis.steps < 1) throw SpecError("grid steps must be >= 1");
    if (axis.steps == 1 && axis.min != axis.max)
        throw SpecError("single-step axis needs min == max");
    if (axis.steps > 1 && axis.max < axis.min)
        throw SpecError("grid max must be >= min");
    return axis;
}

}  // namespace mqw
