"""
LapDeblur - устранение размытия изображений сетью RDN с Лапласианом на входе
"""
