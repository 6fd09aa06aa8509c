#pragma once

#include "eegdn/data/matrix.hpp"
#include "eegdn/data/pipeline.hpp"
#include "eegdn/data/synth.hpp"
#include "eegdn/engine/gradcheck.hpp"
#include "eegdn/engine/layers.hpp"
#include "eegdn/engine/sequential.hpp"
#include "eegdn/engine/tensor.hpp"
#include "eegdn/error.hpp"
#include "eegdn/gradcheck_suite.hpp"
#include "eegdn/keyvalue.hpp"
#include "eegdn/random.hpp"
#include "eegdn/report/metrics_report.hpp"
#include "eegdn/signal/fft.hpp"
#include "eegdn/signal/metrics.hpp"
#include "eegdn/train/loss.hpp"
#include "eegdn/train/rmsprop.hpp"
#include "eegdn/train/trainer.hpp"
#include "eegdn/zoo/builders.hpp"
#include "eegdn/zoo/checkpoint.hpp"
