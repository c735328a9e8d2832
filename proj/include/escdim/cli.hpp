#pragma once

// Flat key = value run configuration plus the batch commands behind the
// command-line driver. Everything lives in the library so the tests can
// exercise the commands in-process; the binary in tools/ only parses flags
// and dispatches.

#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>

#include "escdim/models.hpp"

namespace escdim {

// Anything wrong with the configuration itself: unknown or duplicate keys,
// malformed values, names outside the catalogs, nonpositive constants. The
// driver maps this to the usage exit code.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One flat bag of settings shared by every subcommand. Keys a command does
// not consume are still parsed, validated and echoed, so one file can drive
// a whole study. Comparable so that parse(serialize(c)) == c is testable.
struct RunConfig {
    // model
    std::string model = "plain-wp";  // plain-wp | wp-exp | wp-cosh | wp-power | power-lift
    double w1_re = 0.25, w1_im = 0.0;  // lattice generators
    double w2_re = 0.0, w2_im = 0.25;
    double offset_re = 0.0625, offset_im = 0.0625;  // inner-map constant c;
                                                    // defaults match (w1+w2)/4
                                                    // of the default lattice
    double rho = 1.0;            // wp-power exponent
    std::string branch = "plus";  // wp-power branch: plus | minus
    int lift_order = 2;          // power-lift N (inner map is plain-wp)
    int truncation = 40;         // lattice-sum half-shells

    // counting window
    double r_lo = 2.0, r_hi = 200.0;
    int per_decade = 32;
    int proximity_q = 1024;
    bool with_proximity = true;

    // covering and dimension-bound constants. C1 is the branch-derivative
    // constant (1/2 is exact for the local model); C2/C7, A4/A5 and C8/C9
    // parametrize the three nested-cover families. The remaining A's and
    // C's are recorded for bookkeeping and consumed by no computation here.
    double C1 = 0.5;
    double C2 = 1.0, C7 = 1.0;
    double A4 = 1.0, A5 = 1.0;
    double C8 = 1.0, C9 = 1.0;
    double A1 = 1.0, A2 = 1.0, A3 = 1.0;
    double C3 = 1.0, C4 = 1.0, C5 = 1.0, C6 = 1.0;

    std::string cover = "paper";  // paper | wpexp | escalating | file
    std::string cover_file;      // explicit delta/diam table when cover = file
    double R = 1e6;              // escape radius of the cover
    int levels = 100;

    // render grid and escape schedule
    double x_min = 0.0, x_max = 4.0;
    double y_min = -3.141592653589793, y_max = 3.141592653589793;
    int resolution = 256;
    double schedule_base = 2.718281828459045;  // bars R_k = base^k
    int depth = 64;                            // orbit iteration cap

    std::string out = "escdim-out";  // output base path; commands append extensions

    bool operator==(const RunConfig&) const = default;
};

// key = value per line; # starts a full-line comment; blank lines skipped.
// Unknown keys, duplicate keys and malformed or out-of-range values throw
// ConfigError. An unreadable path throws ConfigError too (the file is part
// of the usage surface).
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// "# effective config" plus every key in byte order, one per line, doubles
// at full precision. Parsing the result reproduces the input struct.
std::string serialize_config(const RunConfig& c);

// The model the config describes, on the lattice (w1, w2) with offset c.
// Lattice or model constructor failures propagate as exceptions.
std::unique_ptr<ModelFunction> build_model(const RunConfig& c);

// Batch commands. Each echoes the effective config to `log`, does its work,
// reports a summary line plus the files written, and returns a process exit
// code: 0 on success, 1 when the computation or an output path fails, 2 for
// usage-level problems (e.g. an empty radius window).
//
// counting  -> <out>.csv with columns r,n,N,m,T and an order-estimate line
// dim-bound -> <out>.csv with columns level,delta,diam,bound and the limit
//              next to the closed-form target
// render    -> <out>.ppm (P6) plus <out>.csv with the escaping pixels as
//              x,y,depth rows
int cmd_counting(const RunConfig& c, std::ostream& log);
int cmd_dim_bound(const RunConfig& c, std::ostream& log);
int cmd_render(const RunConfig& c, std::ostream& log);

}  // namespace escdim
