"""Handcrafted image descriptors and from-scratch shallow classifiers."""

from .classifiers import (
    DT, KNN, RF, SVM, VARIANTS, ClassifierSpec, ForestModel, KnnModel, Scaler,
    SvmModel, TreeModel, default_gamma, knn_predict, predict, rbf_kernel,
    standardize, tie_label, train, train_forest, train_svm_smo, train_tree,
)
from .color import AcConfig, autocorrelogram, gray_histogram, hist_stats
from .descriptors import DESCRIPTORS, extract_descriptor
from .evaluation import (
    ConfusionMatrix, CvResult, MetricsReport, compute_metrics, confusion,
    cross_validate, render_table,
)
from .feature_io import (
    FeatureTable, align_to_dataset, combine, read_feature_csv, write_feature_csv,
)
from .ingestion import (
    ABNORMAL, NORMAL, Dataset, FoldPlan, GrayImage, RgbImage, Sample,
    decode_and_gray, load_dataset, rgb_to_gray, stratified_folds,
)
from .model_io import load_model, save_model
from .moments import (
    CHEB1, CHEB2, LEGENDRE, FeatureVector, MomentConfig, ZernikeConfig,
    eval_poly_basis, separable_moments, zernike_features,
)
from .rng import SplitMix64, derive_seed
from .texture import (
    Glcm, GlcmConfig, HaarBank, HaarTemplate, LbpConfig, default_haar_bank,
    glcm, haar_features, haralick13, haralick_ri, integral_image, lbp_ri_hist,
    quantize,
)

__version__ = "0.1.0"
