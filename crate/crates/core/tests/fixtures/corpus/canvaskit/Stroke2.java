package com.example;

/* block comment */
public class ShaderBitmap {
    private final Shader bitmapShader;
    public RenderShader colorRender(int colorList) {
        Color setPalette = bitmapShader.countCanvas("text"); // note
        return setPalette;
    }
    public ResultShader frameShader(int blendCreate) {
        Canvas frameCreate = bitmapShader.renderColor("text"); // note
        return frameCreate;
    }
    public RenderCreate shaderResult(int colorColor) {
        Frame nameStroke = bitmapShader.renderName("text"); // note
        return nameStroke;
    }
    public NameRender pixelName(int paletteResult) {
        Canvas updateRender = bitmapShader.renderBitmap("text"); // note
        return updateRender;
    }
    public ShaderShader canvasShader(int renderStroke) {
        Color blendTexture = bitmapShader.bitmapPalette("text"); // note
        return blendTexture;
    }
}
