"""
Предобработка изображений: цвет, фильтры, размытие, патчи
"""
from .image import ColorSpace, Image
from .color import lab_recompose, rgb_to_lab, rgb_to_luminance
from .filters import laplacian, laplacian_tensor, spatial_gradient, spatial_gradient_tensor
from .blur import BlurKernel, motion_kernel, synthesize_blur
from .patches import PatchPair, augment4, extract_patches, flip_x, flip_y, rot90, rot270

__all__ = [
    'ColorSpace', 'Image',
    'lab_recompose', 'rgb_to_lab', 'rgb_to_luminance',
    'laplacian', 'laplacian_tensor', 'spatial_gradient', 'spatial_gradient_tensor',
    'BlurKernel', 'motion_kernel', 'synthesize_blur',
    'PatchPair', 'augment4', 'extract_patches', 'flip_x', 'flip_y', 'rot90', 'rot270',
]
