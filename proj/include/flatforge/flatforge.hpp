#pragma once

#include "catalog.hpp"
#include "census.hpp"
#include "certificate.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "flats.hpp"
#include "io.hpp"
#include "lemmas/lift.hpp"
#include "lemmas/reid.hpp"
#include "lemmas/trichotomy.hpp"
#include "lemmas/unavoidable.hpp"
#include "linalg.hpp"
#include "matroid.hpp"
#include "ramsey.hpp"
#include "subset.hpp"
