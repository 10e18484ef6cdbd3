#ifndef TCD_TCD_HPP
#define TCD_TCD_HPP

#include "tcd/dilation.hpp"
#include "tcd/errors.hpp"
#include "tcd/forms.hpp"
#include "tcd/geometry.hpp"
#include "tcd/io.hpp"
#include "tcd/linalg.hpp"
#include "tcd/moduli.hpp"
#include "tcd/parallel.hpp"
#include "tcd/random.hpp"
#include "tcd/spectra.hpp"

#endif  // TCD_TCD_HPP
