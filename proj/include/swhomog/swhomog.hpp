#pragma once

#include "swhomog/array2d.hpp"
#include "swhomog/bathymetry.hpp"
#include "swhomog/errors.hpp"
#include "swhomog/fft.hpp"
#include "swhomog/harness/config.hpp"
#include "swhomog/harness/experiment.hpp"
#include "swhomog/harness/io.hpp"
#include "swhomog/harness/metrics.hpp"
#include "swhomog/homogenized1d.hpp"
#include "swhomog/shape2d.hpp"
#include "swhomog/spectral.hpp"
#include "swhomog/sw2d_fv.hpp"
#include "swhomog/sw2d_spectral.hpp"
#include "swhomog/time_loop.hpp"
#include "swhomog/traveling_wave.hpp"
