#pragma once

#include <cmath>

namespace d2dsim {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

// Powers are carried in linear milliwatts everywhere below the config layer.
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double mw_to_dbm(double mw) { return linear_to_db(mw); }

inline double shannon_bpshz(double sinr) { return std::log2(1.0 + sinr); }

}  // namespace d2dsim
