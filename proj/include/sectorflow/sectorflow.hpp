#pragma once

#include "sectorflow/analysis.hpp"
#include "sectorflow/arborescence.hpp"
#include "sectorflow/entropy.hpp"
#include "sectorflow/export.hpp"
#include "sectorflow/network.hpp"
#include "sectorflow/symbolize.hpp"
#include "sectorflow/synth.hpp"
#include "sectorflow/timeseries.hpp"
