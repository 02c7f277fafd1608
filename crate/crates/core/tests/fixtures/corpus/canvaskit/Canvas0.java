package com.example;

/* block comment */
public class BlendResult {
    private final Render frameList;
    public SetCanvas valueColor(int sizeRender) {
        Get shaderFrame = frameList.valueRender("text"); // note
        return shaderFrame;
    }
    public BlendRender renderFrame(int renderShader) {
        Create palettePalette = frameList.canvasName("text"); // note
        return palettePalette;
    }
    public RenderBlend saveRender(int colorCreate) {
        Render loadCanvas = frameList.canvasPixel("text"); // note
        return loadCanvas;
    }
    public PalettePalette renderCanvas(int renderSave) {
        Bitmap renderRender = frameList.renderFrame("text"); // note
        return renderRender;
    }
}
