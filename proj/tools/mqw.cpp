// Command-line driver: parameter sweeps over the monitored three-site ring,
// one CSV table per invocation. Subcommands map onto the library engines;
// --check re-evaluates a random subsample of cells with an independent route.

#include <CLI11.hpp>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "mqw/closedform.hpp"
#include "mqw/montecarlo.hpp"
#include "mqw/rng.hpp"
#include "mqw/spectra.hpp"
#include "mqw/sweep.hpp"

using namespace mqw;
namespace cf = mqw::closedform;

namespace {

struct Options {
    double alpha = 0.0;
    double gtau = 1.0;
    double phi = 0.0;
    double tol = tol::kPhaseMatch;
    int N = -1;  // -1 resolves to the command default
    std::string protocol = "onsite";
    std::string engine;
    std::vector<std::string> grids;
    int shots = 32000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = "-";
    std::string meta;
    std::string overlay;
    std::string observable = "meanN";
    bool check = false;
    bool phiGiven = false;
};

ProtocolKind protocolFrom(const std::string& name) {
    if (name == "onsite") return ProtocolKind::OnSite;
    if (name == "tracking") return ProtocolKind::Tracking;
    throw SpecError("protocol must be onsite or tracking");
}

// Deterministic per-cell seed derived from the ensemble seed and the cell's
// coordinates, so Monte Carlo cells are thread- and order-invariant.
std::uint64_t cellSeed(std::uint64_t seed, double v1, double v2) {
    const std::uint64_t h1 = CounterRng::mix(std::bit_cast<std::uint64_t>(v1));
    const std::uint64_t h2 =
        CounterRng::mix(std::bit_cast<std::uint64_t>(v2) * 0x9e3779b97f4a7c15ull);
    return CounterRng::mix(seed ^ h1 ^ (h2 << 1));
}

std::string isoTimestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// Everything needed to reproduce the run, minus output destinations.
std::string argvEcho(int argc, char** argv) {
    std::string echo;
    for (int i = 1; i < argc; ++i) {
        const std::string tok = argv[i];
        if (tok == "--out" || tok == "--meta" || tok == "--overlay") {
            ++i;
            continue;
        }
        if (!echo.empty()) echo += ' ';
        echo += tok;
    }
    return echo;
}

struct CellParams {
    double gtau = 1.0;
    double alpha = 0.0;
    double phi = 0.0;
    int N = 20;
};

// Applies the two axis values on top of the fixed parameters.
CellParams resolve(const Options& opt, int defaultN, const AxisSpec& a1, const AxisSpec& a2,
                   double v1, double v2) {
    CellParams c;
    c.gtau = opt.gtau;
    c.alpha = opt.alpha;
    c.phi = opt.phi;
    c.N = (opt.N > 0) ? opt.N : defaultN;
    auto apply = [&](const std::string& name, double v) {
        if (name == "gtau") c.gtau = v;
        else if (name == "alpha") c.alpha = v;
        else if (name == "phi") c.phi = v;
        else if (name == "N") c.N = std::max(1, static_cast<int>(std::lround(v)));
    };
    apply(a1.name, v1);
    apply(a2.name, v2);
    return c;
}

FirstDetectionDistribution runExact(const DetectionSetup& s) {
    return s.protocol == ProtocolKind::OnSite ? fnOnsite(s) : fnTracking(s);
}

DetectionSetup setupFor(const CellParams& c, ProtocolKind protocol,
                        const ComplexVector& initial) {
    DetectionSetup s;
    s.params = ModelParams::fromGammaTau(c.gtau, c.alpha);
    s.protocol = protocol;
    s.initial = initial;
    s.targetIndex = 0;
    s.N = c.N;
    return s;
}

Cell meanCell(const CellParams& c, ProtocolKind protocol, EngineKind engine,
              const ComplexVector& initial, const Options& opt) {
    switch (engine) {
        case EngineKind::Exact: {
            const auto d = runExact(setupFor(c, protocol, initial));
            Cell cell = d.meanN ? Cell::ok(*d.meanN) : Cell::undefined();
            cell.engineTag = "exact";
            return cell;
        }
        case EngineKind::ClosedForm: {
            const double v = protocol == ProtocolKind::OnSite
                                 ? cf::meanOnsiteFinite(c.gtau, c.N)
                                 : cf::meanTrackingFinite(c.gtau, c.N);
            Cell cell = Cell::ok(v);
            cell.engineTag = "closedform";
            return cell;
        }
        case EngineKind::MonteCarlo: {
            const auto s = setupFor(c, protocol, initial);
            const std::uint64_t sd = cellSeed(opt.seed, c.gtau, c.alpha + 31.0 * c.N);
            const auto ens = protocol == ProtocolKind::OnSite
                                 ? sampleOnsite(s, opt.shots, sd)
                                 : sampleTracking(s, opt.shots, sd);
            Cell cell = ens.sampleMeanN ? Cell::ok(*ens.sampleMeanN) : Cell::undefined();
            cell.stderrValue = ens.sampleMeanStdErr;
            cell.engineTag = "montecarlo";
            return cell;
        }
        default: throw SpecError("meanN has no spectral engine");
    }
}

Cell pdetCell(const CellParams& c, ProtocolKind protocol, EngineKind engine,
              const ComplexVector& initial, const Options& opt) {
    switch (engine) {
        case EngineKind::Exact: {
            Cell cell = Cell::ok(runExact(setupFor(c, protocol, initial)).pDet);
            cell.engineTag = "exact";
            return cell;
        }
        case EngineKind::ClosedForm: {
            double sum = 0.0;
            for (int n = 1; n <= c.N; ++n)
                sum += protocol == ProtocolKind::OnSite ? cf::fnOnsiteClosed(c.gtau, n)
                                                        : cf::fnTrackingClosed(c.gtau, n);
            Cell cell = Cell::ok(sum);
            cell.engineTag = "closedform";
            return cell;
        }
        case EngineKind::MonteCarlo: {
            const auto s = setupFor(c, protocol, initial);
            const std::uint64_t sd = cellSeed(opt.seed, c.gtau, c.phi + 17.0 * c.alpha);
            const auto ens = protocol == ProtocolKind::OnSite
                                 ? sampleOnsite(s, opt.shots, sd)
                                 : sampleTracking(s, opt.shots, sd);
            Cell cell = Cell::ok(ens.samplePDet);
            const double p = std::clamp(ens.samplePDet, 0.0, 1.0);
            cell.stderrValue = std::sqrt(p * (1.0 - p) / opt.shots);
            cell.engineTag = "montecarlo";
            return cell;
        }
        default: throw SpecError("pDet has no spectral engine");
    }
}

int writeOutputs(const Options& opt, const std::string& command, ResultTable& table,
                 const std::string& echo) {
    table.header.insert(table.header.begin(),
                        {{"tool", std::string("mqw ") + kVersion},
                         {"command", command},
                         {"argv", echo},
                         {"seed", std::to_string(opt.seed)},
                         {"timestamp", isoTimestamp()}});

    if (opt.out == "-") {
        table.writeCsv(std::cout);
    } else {
        std::ofstream os(opt.out);
        if (!os) {
            std::cerr << "mqw: cannot open " << opt.out << " for writing\n";
            return 2;
        }
        table.writeCsv(os);
    }
    if (!opt.meta.empty()) {
        nlohmann::json j;
        for (const auto& [k, v] : table.header) j["header"][k] = v;
        j["axis1"] = {{"name", table.axis1.name},
                      {"min", table.axis1.min},
                      {"max", table.axis1.max},
                      {"steps", table.axis1.steps}};
        j["axis2"] = {{"name", table.axis2.name},
                      {"min", table.axis2.min},
                      {"max", table.axis2.max},
                      {"steps", table.axis2.steps}};
        j["rows"] = table.cells.size();
        std::ofstream os(opt.meta);
        os << j.dump(2) << "\n";
    }
    return table.anyFailed() ? 3 : 0;
}

// ---------------------------------------------------------------------------
// --check machinery
// ---------------------------------------------------------------------------

using Checker = std::function<bool(double v1, double v2, const Cell& cell, std::string& why)>;

int runCheck(const Options& opt, ResultTable& table, const Checker& checker,
             const std::string& skipReason) {
    if (!opt.check) return 0;
    if (!checker) {
        table.header.emplace_back("check", "skipped (" + skipReason + ")");
        return 0;
    }
    const int total = table.axis1.steps * table.axis2.steps;
    const int wanted = std::max(1, total / 20);
    CounterRng rng(opt.seed ^ 0x5eedc0dedull, 0);
    const auto v1 = table.axis1.values();
    const auto v2 = table.axis2.values();
    int checked = 0;
    for (int k = 0; k < wanted; ++k) {
        const int idx = static_cast<int>(rng.uniform() * total) % total;
        const int i = idx / table.axis2.steps;
        const int j = idx % table.axis2.steps;
        const Cell& cell = table.cells[static_cast<size_t>(idx)];
        if (cell.status == Cell::Status::Failed) continue;
        std::string why;
        if (!checker(v1[static_cast<size_t>(i)], v2[static_cast<size_t>(j)], cell, why)) {
            std::cerr << "mqw: --check failed at (" << v1[static_cast<size_t>(i)] << ", "
                      << v2[static_cast<size_t>(j)] << "): " << why << "\n";
            return 3;
        }
        ++checked;
    }
    table.header.emplace_back("check", "passed on " + std::to_string(checked) + " cells");
    return 0;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

std::vector<AxisSpec> parseGrids(const Options& opt) {
    std::vector<AxisSpec> axes;
    for (const std::string& g : opt.grids) axes.push_back(parseAxisSpec(g));
    if (axes.size() > 2) throw SpecError("at most two --grid axes");
    if (axes.size() == 2 && axes[0].name == axes[1].name)
        throw SpecError("grid axes must name distinct parameters");
    return axes;
}

AxisSpec singletonAxis(const std::string& name, double value) {
    return AxisSpec{name, value, value, 1};
}

int cmdPhaseDiagram(const Options& opt, const std::string& echo) {
    auto axes = parseGrids(opt);
    if (axes.empty()) {
        axes.push_back(AxisSpec{"alpha", -kPi, kPi, 201});
        axes.push_back(AxisSpec{"gtau", 0.0, 7.0, 201});
    }
    if (axes.size() != 2) throw SpecError("phase-diagram needs two axes (alpha, gtau)");
    const bool namesOk = (axes[0].name == "alpha" && axes[1].name == "gtau") ||
                         (axes[0].name == "gtau" && axes[1].name == "alpha");
    if (!namesOk) throw SpecError("phase-diagram axes must be alpha and gtau");

    ResultTable table = runGrid(axes[0], axes[1], opt.threads, [&](double a, double b) {
        const double alpha = axes[0].name == "alpha" ? a : b;
        const double gtau = axes[0].name == "alpha" ? b : a;
        const auto cls = classifyPhaseFactors(ModelParams::fromGammaTau(gtau, alpha), opt.tol);
        Cell cell = Cell::ok(static_cast<double>(cls.distinctCount));
        cell.engineTag = "exact";
        return cell;
    });
    table.hasEngineTag = true;
    {
        std::ostringstream ts;
        ts << opt.tol;
        table.header.emplace_back("tol", ts.str());
    }

    if (!opt.overlay.empty()) {
        std::ofstream os(opt.overlay);
        if (!os) {
            std::cerr << "mqw: cannot open " << opt.overlay << "\n";
            return 2;
        }
        os << "# analytic matching curves\npair,branch,family,alpha,gtau\n";
        os << std::setprecision(17);
        const AxisSpec& alphaAxis = axes[0].name == "alpha" ? axes[0] : axes[1];
        const AxisSpec& gtauAxis = axes[0].name == "alpha" ? axes[1] : axes[0];
        for (auto pair : {std::pair<int, int>{1, 2}, {1, 0}, {2, 0}}) {
            for (const auto& curve : matchingCurves(pair, -8, 8)) {
                for (int s = 0; s <= 400; ++s) {
                    const double alpha =
                        alphaAxis.min + (alphaAxis.max - alphaAxis.min) * s / 400.0;
                    try {
                        const double g = curve.gammaTau(alpha);
                        if (g < gtauAxis.min || g > gtauAxis.max) continue;
                        os << pair.first << pair.second << "," << curve.branchIndex << ","
                           << curve.family << "," << alpha << "," << g << "\n";
                    } catch (const DomainError&) {
                    }
                }
            }
        }
    }

    // Independent route: invert the analytic matching conditions instead of
    // comparing phase factors on the unit circle.
    const double angleTol = 2.0 * std::asin(std::min(1.0, opt.tol / 2.0));
    Checker checker = [&, angleTol](double a, double b, const Cell& cell, std::string& why) {
        const double alpha = axes[0].name == "alpha" ? a : b;
        const double gtau = axes[0].name == "alpha" ? b : a;
        auto nearInteger = [&](double x) {
            return std::abs(x - std::round(x)) * 2.0 * kPi <= angleTol;
        };
        const bool m12 = nearInteger(std::sqrt(3.0) * gtau * std::sin(alpha) / kPi);
        const bool m10 =
            nearInteger(gtau * (std::sin(alpha + kPi / 6.0) + std::cos(alpha)) / kPi);
        const bool m20 =
            nearInteger(gtau * (std::sin(-alpha + kPi / 6.0) + std::cos(alpha)) / kPi);
        int groups = 3;
        if ((m12 && m10) || (m12 && m20) || (m10 && m20)) groups = 1;
        else if (m12 || m10 || m20) groups = 2;
        if (groups != static_cast<int>(cell.value)) {
            why = "analytic curve count " + std::to_string(groups) + " vs classified " +
                  std::to_string(static_cast<int>(cell.value));
            return false;
        }
        return true;
    };
    const int rc = runCheck(opt, table, checker, "");
    if (rc != 0) return rc;
    return writeOutputs(opt, "phase-diagram", table, echo);
}

int cmdReturnTime(const Options& opt, const std::string& echo) {
    auto axes = parseGrids(opt);
    if (axes.empty()) axes.push_back(AxisSpec{"gtau", 0.05, 6.5, 400});
    if (axes.size() == 1) axes.push_back(singletonAxis("N", opt.N > 0 ? opt.N : 20));
    for (const auto& a : axes)
        if (a.name == "phi") throw SpecError("return-time has no phi axis");

    const ProtocolKind protocol = protocolFrom(opt.protocol);
    const EngineKind engine = engineFromName(opt.engine.empty() ? "exact" : opt.engine);
    if (!observableSupportsEngine(Observable::MeanN, engine))
        throw SpecError("return-time supports engines exact|closedform|montecarlo");
    const bool alphaZeroEverywhere =
        opt.alpha == 0.0 &&
        std::none_of(axes.begin(), axes.end(), [](const AxisSpec& a) {
            return a.name == "alpha" && (a.min != 0.0 || a.max != 0.0);
        });
    if (engine == EngineKind::ClosedForm && !alphaZeroEverywhere)
        throw SpecError("closedform engine requires alpha = 0");

    const ComplexVector initial = ComplexVector::basis(3, 0);
    ResultTable table = runGrid(axes[0], axes[1], opt.threads, [&](double a, double b) {
        const CellParams c = resolve(opt, 20, axes[0], axes[1], a, b);
        return meanCell(c, protocol, engine, initial, opt);
    });
    table.hasEngineTag = true;
    table.hasStderr = engine == EngineKind::MonteCarlo;

    Checker checker;
    if (engine == EngineKind::MonteCarlo) {
        checker = [&](double a, double b, const Cell& cell, std::string& why) {
            const CellParams c = resolve(opt, 20, axes[0], axes[1], a, b);
            const Cell ref = meanCell(c, protocol, EngineKind::Exact, initial, opt);
            if (cell.status != Cell::Status::Ok || ref.status != Cell::Status::Ok)
                return true;
            const double se = std::max(cell.stderrValue.value_or(0.0), 1e-6);
            if (std::abs(cell.value - ref.value) > 5.0 * se) {
                why = "montecarlo vs exact meanN";
                return false;
            }
            return true;
        };
    } else if (alphaZeroEverywhere) {
        const EngineKind other =
            engine == EngineKind::Exact ? EngineKind::ClosedForm : EngineKind::Exact;
        checker = [&, other](double a, double b, const Cell& cell, std::string& why) {
            const CellParams c = resolve(opt, 20, axes[0], axes[1], a, b);
            const Cell ref = meanCell(c, protocol, other, initial, opt);
            if (cell.status != Cell::Status::Ok || ref.status != Cell::Status::Ok)
                return cell.status == ref.status;
            if (std::abs(cell.value - ref.value) > 1e-9) {
                why = "closed form vs recursion differ by " +
                      std::to_string(std::abs(cell.value - ref.value));
                return false;
            }
            return true;
        };
    }
    const int rc =
        runCheck(opt, table, checker, "no independent engine for meanN at alpha != 0");
    if (rc != 0) return rc;
    return writeOutputs(opt, "return-time", table, echo);
}

int cmdDetectionMap(const Options& opt, const std::string& echo) {
    auto axes = parseGrids(opt);
    if (axes.empty()) {
        axes.push_back(AxisSpec{"gtau", 0.05, 6.5, 201});
        axes.push_back(AxisSpec{"phi", 0.0, 2.0 * kPi, 201});
    }
    if (axes.size() != 2) throw SpecError("detection-map needs two axes");
    const bool phiMode = axes[0].name == "phi" || axes[1].name == "phi";
    const bool alphaMode = axes[0].name == "alpha" || axes[1].name == "alpha";
    if (!(phiMode || alphaMode) || (phiMode && alphaMode))
        throw SpecError("detection-map axes are (gtau, phi) or (gtau, alpha)");

    const ProtocolKind protocol = protocolFrom(opt.protocol);
    const EngineKind engine = engineFromName(opt.engine.empty() ? "exact" : opt.engine);
    if (engine != EngineKind::Exact && engine != EngineKind::MonteCarlo)
        throw SpecError("detection-map supports engines exact|montecarlo");

    auto initialFor = [&](const CellParams& c) {
        return phiMode ? phasedInitialState(c.phi) : ComplexVector::basis(3, 1);
    };
    ResultTable table = runGrid(axes[0], axes[1], opt.threads, [&](double a, double b) {
        const CellParams c = resolve(opt, 10, axes[0], axes[1], a, b);
        return pdetCell(c, protocol, engine, initialFor(c), opt);
    });
    table.hasEngineTag = true;
    table.hasStderr = engine == EngineKind::MonteCarlo;

    Checker checker = [&](double a, double b, const Cell& cell, std::string& why) {
        const CellParams c = resolve(opt, 10, axes[0], axes[1], a, b);
        Cell sampled, exact;
        if (engine == EngineKind::MonteCarlo) {
            sampled = cell;
            exact = pdetCell(c, protocol, EngineKind::Exact, initialFor(c), opt);
        } else {
            exact = cell;
            sampled = pdetCell(c, protocol, EngineKind::MonteCarlo, initialFor(c), opt);
        }
        const double se = std::max(sampled.stderrValue.value_or(0.0), 1e-9);
        if (std::abs(sampled.value - exact.value) > std::max(5.0 * se, 4.0 / opt.shots)) {
            why = "montecarlo vs exact pDet";
            return false;
        }
        return true;
    };
    const int rc = runCheck(opt, table, checker, "");
    if (rc != 0) return rc;
    return writeOutputs(opt, "detection-map", table, echo);
}

int cmdBroadening(const Options& opt, const std::string& echo) {
    if (opt.alpha != 0.0) throw SpecError("broadening is defined on the alpha = 0 line");
    auto axes = parseGrids(opt);
    if (axes.empty())
        axes.push_back(AxisSpec{"gtau", 2.0 * kPi / 3.0 - 0.45, 2.0 * kPi / 3.0 + 0.45, 181});
    if (axes.size() == 1) axes.push_back(singletonAxis("N", opt.N > 0 ? opt.N : 20));
    if (axes[0].name != "gtau" || axes[1].name != "N")
        throw SpecError("broadening axes are gtau and N");

    const ProtocolKind protocol = protocolFrom(opt.protocol);
    ResultTable table = runGrid(axes[0], axes[1], opt.threads, [&](double g, double nRaw) {
        const int n = std::max(1, static_cast<int>(std::lround(nRaw)));
        const auto setup =
            DetectionSetup::returnProblem(ModelParams::fromGammaTau(g), protocol, n);
        const auto d = runExact(setup);
        Cell cell = d.meanN ? Cell::ok(*d.meanN) : Cell::undefined();
        const int k = cf::nearestTransitionIndex(g);
        if (protocol == ProtocolKind::OnSite)
            cell.extras = {cf::meanOnsiteFinite(g, n), cf::meanOnsiteBroadened(g, n, k)};
        else
            cell.extras = {cf::meanTrackingFinite(g, n), cf::meanTrackingBroadened(g, n, k)};
        cell.engineTag = "exact";
        return cell;
    });
    table.extraColumns = {"closedform", "broadened"};
    table.hasEngineTag = true;
    const int rc = runCheck(opt, table, nullptr, "all engines already present as columns");
    if (rc != 0) return rc;
    return writeOutputs(opt, "broadening", table, echo);
}

int cmdSpectra(const Options& opt, const std::string& echo) {
    auto axes = parseGrids(opt);
    if (axes.empty()) axes.push_back(AxisSpec{"gtau", 0.05, 6.5, 400});
    if (axes.size() == 1) axes.push_back(singletonAxis("alpha", opt.alpha));
    const ProtocolKind protocol = protocolFrom(opt.protocol);
    if (!opt.engine.empty() && engineFromName(opt.engine) != EngineKind::Spectral)
        throw SpecError("spectra uses the spectral engine");

    ResultTable table = runGrid(axes[0], axes[1], opt.threads, [&](double a, double b) {
        const CellParams c = resolve(opt, 20, axes[0], axes[1], a, b);
        const ModelParams p = ModelParams::fromGammaTau(c.gtau, c.alpha);
        const SurvivalSpectrum s =
            protocol == ProtocolKind::OnSite ? survivalSpectrumOnsite(p) : gtarSpectrum(p);
        std::vector<double> mods;
        for (const cplx& mu : s.eigenvalues) mods.push_back(std::abs(mu));
        std::sort(mods.rbegin(), mods.rend());
        Cell cell = Cell::ok(s.maxAbs);
        cell.extras = {mods[0], mods[1], mods[2]};
        cell.engineTag = s.defective ? "spectral-degenerate" : "spectral";
        return cell;
    });
    table.extraColumns = {"abs_lambda1", "abs_lambda2", "abs_lambda3"};
    table.hasEngineTag = true;
    const int rc = runCheck(opt, table, nullptr, "no independent engine for spectra");
    if (rc != 0) return rc;
    return writeOutputs(opt, "spectra", table, echo);
}

int cmdNullDecay(const Options& opt, const std::string& echo) {
    auto axes = parseGrids(opt);
    if (axes.empty()) axes.push_back(AxisSpec{"N", 1.0, 100.0, 100});
    if (axes.size() == 1) axes.push_back(singletonAxis("gtau", opt.gtau));
    const ProtocolKind protocol = protocolFrom(opt.protocol);
    const EngineKind engine = engineFromName(opt.engine.empty() ? "exact" : opt.engine);
    if (!observableSupportsEngine(Observable::SurvivalSN, engine))
        throw SpecError("null-decay supports engines exact|spectral");
    if (engine == EngineKind::Spectral && protocol != ProtocolKind::Tracking)
        throw SpecError("the spectral route applies to the tracking protocol");

    const ComplexVector initial = ComplexVector::basis(3, 0);
    ResultTable table = runGrid(axes[0], axes[1], opt.threads, [&](double a, double b) {
        const CellParams c = resolve(opt, 50, axes[0], axes[1], a, b);
        const ModelParams p = ModelParams::fromGammaTau(c.gtau, c.alpha);
        if (engine == EngineKind::Spectral) {
            try {
                Cell cell = Cell::ok(nullMeasurementSpectral(p, initial, 0, c.N));
                cell.engineTag = "spectral";
                return cell;
            } catch (const DefectiveDecompositionError&) {
                Cell cell = Cell::ok(nullMeasurementRecursion(p, protocol, initial, 0, c.N));
                cell.engineTag = "recursion-fallback";
                return cell;
            }
        }
        Cell cell = Cell::ok(nullMeasurementRecursion(p, protocol, initial, 0, c.N));
        cell.engineTag = "exact";
        return cell;
    });
    table.hasEngineTag = true;

    Checker checker;
    if (protocol == ProtocolKind::Tracking) {
        checker = [&](double a, double b, const Cell& cell, std::string& why) {
            const CellParams c = resolve(opt, 50, axes[0], axes[1], a, b);
            const ModelParams p = ModelParams::fromGammaTau(c.gtau, c.alpha);
            double ref = 0.0;
            if (engine == EngineKind::Spectral) {
                ref = nullMeasurementRecursion(p, protocol, initial, 0, c.N);
            } else {
                try {
                    ref = nullMeasurementSpectral(p, initial, 0, c.N);
                } catch (const DefectiveDecompositionError&) {
                    return true;  // no independent value at a degenerate point
                }
            }
            if (std::abs(cell.value - ref) > 1e-8) {
                why = "spectral vs recursion differ by " +
                      std::to_string(std::abs(cell.value - ref));
                return false;
            }
            return true;
        };
    }
    const int rc = runCheck(opt, table, checker, "spectral route is tracking-only");
    if (rc != 0) return rc;
    return writeOutputs(opt, "null-decay", table, echo);
}

int cmdCrossover(const Options& opt, const std::string& echo) {
    auto axes = parseGrids(opt);
    if (axes.empty()) axes.push_back(AxisSpec{"N", 1.0, 2000.0, 60});
    if (axes.size() == 1) axes.push_back(singletonAxis("gtau", opt.gtau));
    const ProtocolKind protocol = protocolFrom(opt.protocol);

    const ComplexVector initial = ComplexVector::basis(3, 0);
    ResultTable table = runGrid(axes[0], axes[1], opt.threads, [&](double a, double b) {
        const CellParams c = resolve(opt, 20, axes[0], axes[1], a, b);
        return meanCell(c, protocol, EngineKind::Exact, initial, opt);
    });
    table.hasEngineTag = true;
    Checker checker = [&](double a, double b, const Cell& cell, std::string& why) {
        const CellParams c = resolve(opt, 20, axes[0], axes[1], a, b);
        const Cell ref = meanCell(c, protocol, EngineKind::MonteCarlo, initial, opt);
        if (cell.status != Cell::Status::Ok || ref.status != Cell::Status::Ok) return true;
        const double se = std::max(ref.stderrValue.value_or(0.0), 1e-6);
        if (std::abs(cell.value - ref.value) > 5.0 * se) {
            why = "exact vs montecarlo crossover mean";
            return false;
        }
        return true;
    };
    const int rc = runCheck(opt, table, checker, "");
    if (rc != 0) return rc;
    return writeOutputs(opt, "crossover", table, echo);
}

int cmdChiral(const Options& opt, const std::string& echo) {
    auto axes = parseGrids(opt);
    if (axes.empty()) {
        axes.push_back(AxisSpec{"gtau", 0.05, 6.5, 201});
        axes.push_back(AxisSpec{"alpha", -kPi / 2.0, kPi / 2.0, 201});
    }
    if (axes.size() != 2 || !((axes[0].name == "gtau" && axes[1].name == "alpha") ||
                              (axes[0].name == "alpha" && axes[1].name == "gtau")))
        throw SpecError("chiral axes are gtau and alpha");
    const ProtocolKind protocol = protocolFrom(opt.protocol);
    const EngineKind engine = engineFromName(opt.engine.empty() ? "exact" : opt.engine);
    if (!observableSupportsEngine(Observable::DeltaPDet, engine))
        throw SpecError("chiral supports engines exact|montecarlo");

    auto delta = [&](const CellParams& c, EngineKind e) {
        const Cell p1 = pdetCell(c, protocol, e, ComplexVector::basis(3, 1), opt);
        const Cell p2 = pdetCell(c, protocol, e, ComplexVector::basis(3, 2), opt);
        Cell cell = Cell::ok(p1.value - p2.value);
        if (e == EngineKind::MonteCarlo) {
            const double s1 = p1.stderrValue.value_or(0.0);
            const double s2 = p2.stderrValue.value_or(0.0);
            cell.stderrValue = std::sqrt(s1 * s1 + s2 * s2);
        }
        cell.engineTag = engineName(e);
        return cell;
    };
    ResultTable table = runGrid(axes[0], axes[1], opt.threads, [&](double a, double b) {
        const CellParams c = resolve(opt, 10, axes[0], axes[1], a, b);
        return delta(c, engine);
    });
    table.hasEngineTag = true;
    table.hasStderr = engine == EngineKind::MonteCarlo;
    Checker checker = [&](double a, double b, const Cell& cell, std::string& why) {
        const CellParams c = resolve(opt, 10, axes[0], axes[1], a, b);
        const EngineKind other =
            engine == EngineKind::Exact ? EngineKind::MonteCarlo : EngineKind::Exact;
        const Cell ref = delta(c, other);
        const double se = std::max(engine == EngineKind::Exact
                                       ? ref.stderrValue.value_or(0.0)
                                       : cell.stderrValue.value_or(0.0),
                                   1e-9);
        if (std::abs(cell.value - ref.value) > std::max(5.0 * se, 4.0 / opt.shots)) {
            why = "exact vs montecarlo deltaPDet";
            return false;
        }
        return true;
    };
    const int rc = runCheck(opt, table, checker, "");
    if (rc != 0) return rc;
    return writeOutputs(opt, "chiral", table, echo);
}

int cmdMonteCarlo(const Options& opt, const std::string& echo) {
    auto axes = parseGrids(opt);
    if (axes.empty()) axes.push_back(AxisSpec{"gtau", 0.05, 6.5, 100});
    if (axes.size() == 1) axes.push_back(singletonAxis("N", opt.N > 0 ? opt.N : 20));
    const ProtocolKind protocol = protocolFrom(opt.protocol);
    const Observable obs = observableFromName(opt.observable);
    if (obs != Observable::MeanN && obs != Observable::PDet)
        throw SpecError("montecarlo reports meanN or pDet");

    const bool phased = opt.phiGiven || axes[0].name == "phi" || axes[1].name == "phi";
    auto initialFor = [&](const CellParams& c) {
        return phased ? phasedInitialState(c.phi) : ComplexVector::basis(3, 0);
    };
    ResultTable table = runGrid(axes[0], axes[1], opt.threads, [&](double a, double b) {
        const CellParams c = resolve(opt, 20, axes[0], axes[1], a, b);
        return obs == Observable::MeanN
                   ? meanCell(c, protocol, EngineKind::MonteCarlo, initialFor(c), opt)
                   : pdetCell(c, protocol, EngineKind::MonteCarlo, initialFor(c), opt);
    });
    table.hasEngineTag = true;
    table.hasStderr = true;
    table.header.emplace_back("shots", std::to_string(opt.shots));

    Checker checker = [&](double a, double b, const Cell& cell, std::string& why) {
        const CellParams c = resolve(opt, 20, axes[0], axes[1], a, b);
        const Cell ref = obs == Observable::MeanN
                             ? meanCell(c, protocol, EngineKind::Exact, initialFor(c), opt)
                             : pdetCell(c, protocol, EngineKind::Exact, initialFor(c), opt);
        if (cell.status != Cell::Status::Ok || ref.status != Cell::Status::Ok) return true;
        const double se = std::max(cell.stderrValue.value_or(0.0), 1e-9);
        if (std::abs(cell.value - ref.value) > std::max(5.0 * se, 4.0 / opt.shots)) {
            why = "sampled value strays from the exact engine";
            return false;
        }
        return true;
    };
    const int rc = runCheck(opt, table, checker, "");
    if (rc != 0) return rc;
    return writeOutputs(opt, "montecarlo", table, echo);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"monitored quantum walk sweeps on the three-site chiral ring"};
    app.require_subcommand(1);

    Options opt;
    const std::string echo = argvEcho(argc, argv);

    std::map<std::string, std::function<int(const Options&, const std::string&)>> handlers = {
        {"phase-diagram", cmdPhaseDiagram}, {"return-time", cmdReturnTime},
        {"detection-map", cmdDetectionMap}, {"broadening", cmdBroadening},
        {"spectra", cmdSpectra},            {"null-decay", cmdNullDecay},
        {"crossover", cmdCrossover},        {"chiral", cmdChiral},
        {"montecarlo", cmdMonteCarlo},
    };
    std::map<std::string, CLI::Option*> phiOpts;

    for (auto& [name, fn] : handlers) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--alpha", opt.alpha, "flux phase (radians)");
        sub->add_option("--gtau", opt.gtau, "dimensionless sampling time gamma*tau");
        phiOpts[name] = sub->add_option("--phi", opt.phi, "initial-state phase");
        sub->add_option("--N", opt.N, "number of measurements");
        sub->add_option("--protocol", opt.protocol, "onsite|tracking")
            ->check(CLI::IsMember({"onsite", "tracking"}));
        sub->add_option("--engine", opt.engine, "exact|closedform|montecarlo|spectral");
        sub->add_option("--grid", opt.grids, "axis spec NAME:MIN:MAX:STEPS (up to twice)");
        sub->add_option("--shots", opt.shots, "Monte Carlo runs per cell");
        sub->add_option("--seed", opt.seed, "ensemble seed");
        sub->add_option("--tol", opt.tol, "phase-factor matching tolerance");
        sub->add_option("--threads", opt.threads, "worker threads");
        sub->add_option("--out", opt.out, "output CSV path ('-' = stdout)");
        sub->add_option("--meta", opt.meta, "sidecar JSON metadata path");
        sub->add_option("--observable", opt.observable, "montecarlo: meanN|pDet");
        sub->add_flag("--check", opt.check, "cross-validate a 5% cell subsample");
        if (name == "phase-diagram")
            sub->add_option("--overlay", opt.overlay, "write analytic curves CSV here");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    for (auto& [name, fn] : handlers) {
        if (app.got_subcommand(name)) {
            opt.phiGiven = phiOpts[name]->count() > 0;
            try {
                return fn(opt, echo);
            } catch (const SpecError& e) {
                std::cerr << "mqw: " << e.what() << "\n";
                return 2;
            } catch (const std::exception& e) {
                std::cerr << "mqw: numerical failure: " << e.what() << "\n";
                return 3;
            }
        }
    }
    return 2;
}
